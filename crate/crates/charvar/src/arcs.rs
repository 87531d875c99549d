//! Strata of the SU(2) character variety of a torus-knot exterior or a
//! connected sum of torus-knot exteriors, with their exact boundary images
//! in the pillowcase.
//!
//! The exact data (slopes −pq, endpoints on the grid π·k/(|p|q), abelian
//! limits) is produced in closed form and then verified against an
//! independent numeric tracer, which is also the source of the concrete
//! representations fed to the cohomology computations.

use crate::pillowcase::{Angle, PillowPoint, PillowSegment, Slope};
use crate::presentation::Presentation;
use crate::su2::{rotation_between, GroupElement, StabilizerType};
use crate::{Error, Result};
use num_integer::Integer;
use num_rational::Rational64;
use serde::{Deserialize, Serialize};
use std::collections::HashSet;

/// Per-summand content of a stratum: abelian, or one irreducible arc.
pub type Selection = Vec<Option<(i64, i64)>>;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub enum StratumKind {
    /// Abelian on every summand.
    Abelian,
    /// One knot, irreducible: the (a, b) arc.
    IrreducibleArc { a: i64, b: i64 },
    /// Composite, irreducible on exactly one summand.
    HalfAbelian { summand: usize, a: i64, b: i64 },
    /// Composite with two or more irreducible summands; carries an
    /// internal torus of gluing parameters.
    GluedFamily { torus_fiber_dim: usize },
}

/// Where the closure of a stratum meets a more abelian stratum.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct EndpointAdjacency {
    /// Meridian angle of the endpoint.
    pub x: Angle,
    /// The endpoint as a pillowcase point.
    pub point: PillowPoint,
    /// Selection of the limiting stratum at this endpoint.
    pub adjacent_selection: Selection,
}

/// One parametrized family of conjugacy classes of representations of a
/// knot-exterior group, together with its exact boundary image.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Stratum {
    /// Label of the exterior this stratum belongs to.
    pub piece: String,
    /// The summands (p, q) of the exterior, in order.
    pub summands: Vec<(i64, i64)>,
    /// Arc choice per summand; `None` is abelian.
    pub selection: Selection,
    pub kind: StratumKind,
    pub interior_stabilizer: StabilizerType,
    /// Exact image of the restriction to the boundary torus.
    pub boundary_image: PillowSegment,
    /// Dimension of the internal torus of gluing parameters.
    pub internal_fiber_dim: usize,
    /// Dimension of the stratum itself (1 for arcs, 1 + fiber for families).
    pub intrinsic_dim: usize,
    pub endpoints: Vec<EndpointAdjacency>,
}

impl Stratum {
    /// Meridian-angle range of the stratum.
    pub fn x_range(&self) -> (Angle, Angle, bool, bool) {
        self.boundary_image.param_range()
    }

    pub fn is_abelian(&self) -> bool {
        matches!(self.kind, StratumKind::Abelian)
    }

    /// Stabilizer of the character at meridian angle `x` (the interior
    /// type except at central abelian points).
    pub fn stabilizer_at(&self, x: Angle) -> StabilizerType {
        if self.is_abelian() && (x.is_zero() || x == Angle::pi()) {
            StabilizerType::Full
        } else {
            self.interior_stabilizer
        }
    }

    /// Restriction to a closed meridian window (for local pictures);
    /// `None` when the window misses the stratum.
    pub fn clip_to_window(&self, lo: Angle, hi: Angle) -> Option<Stratum> {
        let seg = self.boundary_image.clipped(lo, hi, true, true)?;
        let mut out = self.clone();
        out.boundary_image = seg;
        out.endpoints.retain(|e| e.x >= lo && e.x <= hi);
        Some(out)
    }
}

/// Exact endpoints and intercept of the (a, b) arc of the (p, q) torus
/// knot; the image line is y = −pq·x + aπ.
fn arc_exact_data(p: i64, q: i64, a: i64, b: i64) -> Result<(Angle, Angle, Angle)> {
    let (m, n) = meridian_exponents_of(p, q)?;
    let fold = |r: Rational64| -> Angle {
        let two = Rational64::from_integer(2);
        let mut v = r % two;
        if v < Rational64::from_integer(0) {
            v += two;
        }
        if v > Rational64::from_integer(1) {
            v = two - v;
        }
        Angle::from_ratio(v)
    };
    let alpha = Rational64::new(a, p.abs());
    let beta = Rational64::new(b, q);
    let e0 = fold(Rational64::from_integer(m) * alpha + Rational64::from_integer(n) * beta);
    let e1 = fold(Rational64::from_integer(m) * alpha - Rational64::from_integer(n) * beta);
    let (lo, hi) = if e0 <= e1 { (e0, e1) } else { (e1, e0) };
    if lo == hi {
        return Err(Error::Internal(format!(
            "arc ({a},{b}) of T({p},{q}) has coinciding endpoints"
        )));
    }
    Ok((lo, hi, Angle::of(a, 1)))
}

fn meridian_exponents_of(p: i64, q: i64) -> Result<(i64, i64)> {
    let pres = Presentation::torus_knot(p, q)?;
    let per = pres.peripheral.as_ref().unwrap();
    let sums = per.meridian.exponent_sums(2);
    Ok((sums[0], sums[1]))
}

/// Numeric tracer for the (a, b) arc of the (p, q) torus knot.
///
/// Sweeps the tilt t between the two generator axes over a grid in (0, π)
/// clustered at the ends, builds the representation, and returns the
/// boundary holonomy pairs (meridian angle, longitude angle) folded into
/// x ∈ [0, π], y ∈ [0, 2π). Entirely independent of the exact stratum
/// construction; used as its oracle.
pub fn trace_arc_numeric(
    p: i64,
    q: i64,
    a: i64,
    b: i64,
    samples: usize,
) -> Result<Vec<(f64, f64)>> {
    if p.gcd(&q) != 1 {
        return Err(Error::InvalidInput(format!("p = {p}, q = {q} not coprime")));
    }
    if q < 2 || p.abs() < 2 {
        return Err(Error::InvalidInput(format!(
            "need |p| ≥ 2 and q ≥ 2, got ({p}, {q}); relabel the knot for q < 0"
        )));
    }
    if !(1 <= a && a < p.abs()) || !(1 <= b && b < q) {
        return Err(Error::InvalidInput(format!(
            "arc labels out of range: a = {a} (1..{}), b = {b} (1..{q})",
            p.abs()
        )));
    }
    if (a - b) % 2 != 0 {
        return Err(Error::InvalidInput(format!(
            "a = {a}, b = {b} must have equal parity (centrality of u^p = v^q)"
        )));
    }
    if samples == 0 {
        return Err(Error::InvalidInput("need at least one sample".into()));
    }
    let pres = Presentation::torus_knot(p, q)?;
    let per = pres.peripheral.clone().unwrap();
    let alpha = std::f64::consts::PI * a as f64 / p.abs() as f64;
    let beta = std::f64::consts::PI * b as f64 / q as f64;
    let mut out = Vec::with_capacity(samples);
    for j in 1..=samples {
        // Cosine-clustered grid: resolves the abelian limits to O(1/N⁴).
        let s = std::f64::consts::PI * j as f64 / (samples + 1) as f64;
        let t = std::f64::consts::PI * (1.0 - s.cos()) / 2.0;
        let u = GroupElement::exp([1.0, 0.0, 0.0], alpha)?;
        let v = GroupElement::exp([t.cos(), t.sin(), 0.0], beta)?;
        let rep = [u, v];
        for r in &pres.relators {
            let val = r.evaluate(&rep)?;
            if val.dist_to_identity() > 1e-9 {
                return Err(Error::Internal(format!(
                    "relator not satisfied on trace: deviation {}",
                    val.dist_to_identity()
                )));
            }
        }
        let mu = per.meridian.evaluate(&rep)?;
        let la = per.longitude.evaluate(&rep)?;
        let x = mu.holonomy_angle();
        let axis = mu.axis().unwrap_or([1.0, 0.0, 0.0]);
        let mut y = la.signed_angle_about(axis);
        if y < 0.0 {
            y += 2.0 * std::f64::consts::PI;
        }
        out.push((x, y));
    }
    Ok(out)
}

/// Distance of a holonomy pair (x, y) from the pillowcase image of the
/// line y = s·x + c, measured vertically modulo the deck group.
pub fn residual_to_line(x: f64, y: f64, s: f64, c: f64) -> f64 {
    let d1 = wrap_pm_pi(y - s * x - c).abs();
    let d2 = wrap_pm_pi(-y + s * x - c).abs();
    d1.min(d2)
}

/// Representative of v in (−π, π].
pub fn wrap_pm_pi(v: f64) -> f64 {
    let two_pi = 2.0 * std::f64::consts::PI;
    let mut r = v % two_pi;
    if r > std::f64::consts::PI {
        r -= two_pi;
    }
    if r <= -std::f64::consts::PI {
        r += two_pi;
    }
    r
}

fn verify_arc_against_oracle(
    p: i64,
    q: i64,
    a: i64,
    b: i64,
    lo: Angle,
    hi: Angle,
) -> Result<()> {
    let samples = 256;
    let trace = trace_arc_numeric(p, q, a, b, samples)?;
    let s = -(p * q) as f64;
    let c = std::f64::consts::PI * a as f64;
    let mut min_x = f64::INFINITY;
    let mut max_x = f64::NEG_INFINITY;
    for &(x, y) in &trace {
        let r = residual_to_line(x, y, s, c);
        if r > 1e-9 {
            return Err(Error::Internal(format!(
                "arc ({a},{b}) of T({p},{q}): oracle point off the exact line by {r:.3e}"
            )));
        }
        min_x = min_x.min(x);
        max_x = max_x.max(x);
    }
    for (float_end, exact) in [(min_x, lo), (max_x, hi)] {
        if (float_end - exact.to_f64()).abs() > 1e-6 {
            return Err(Error::Internal(format!(
                "arc ({a},{b}) of T({p},{q}): oracle endpoint {float_end} vs exact {exact}"
            )));
        }
        // Snap to the grid π·k/(|p|q) and compare with the exact endpoint.
        let den = (p.abs() * q) as f64;
        let k = (float_end * den / std::f64::consts::PI).round() as i64;
        if Angle::of(k, p.abs() * q) != exact {
            return Err(Error::Internal(format!(
                "arc ({a},{b}) of T({p},{q}): snapped endpoint {k}π/{} differs from exact {exact}",
                p.abs() * q
            )));
        }
    }
    Ok(())
}

/// The abelian stratum of an exterior with the given summands.
fn abelian_stratum(summands: &[(i64, i64)], piece: &str) -> Stratum {
    Stratum {
        piece: piece.to_string(),
        summands: summands.to_vec(),
        selection: vec![None; summands.len()],
        kind: StratumKind::Abelian,
        interior_stabilizer: StabilizerType::Circle,
        boundary_image: PillowSegment::on_line(
            Slope::integer(0),
            Angle::zero(),
            Angle::zero(),
            Angle::pi(),
            true,
            true,
        )
        .unwrap(),
        internal_fiber_dim: 0,
        intrinsic_dim: 1,
        endpoints: Vec::new(),
    }
}

/// Builds the stratum of a composite exterior for one arc selection.
///
/// Returns `None` when the meridian ranges of the selected arcs do not
/// overlap. The boundary image has slope Σ(−pᵢqᵢ) and intercept Σ aᵢπ
/// over the common meridian range: longitudes multiply, so the summand
/// vertical coordinates add.
pub fn stratum_for_selection(
    summands: &[(i64, i64)],
    selection: &Selection,
    piece: &str,
    verify_oracle: bool,
) -> Result<Option<Stratum>> {
    if selection.len() != summands.len() {
        return Err(Error::InvalidInput("selection length mismatch".into()));
    }
    let irr: Vec<usize> =
        selection.iter().enumerate().filter_map(|(i, s)| s.map(|_| i)).collect();
    if irr.is_empty() {
        return Ok(Some(abelian_stratum(summands, piece)));
    }
    let mut slope_sum = 0i64;
    let mut intercept = Angle::zero();
    let mut lo = Angle::zero();
    let mut hi = Angle::pi();
    let mut end_data: Vec<(Angle, usize)> = Vec::new();
    for &i in &irr {
        let (p, q) = summands[i];
        let (a, b) = selection[i].unwrap();
        if !(1 <= a && a < p.abs() && 1 <= b && b < q && (a - b) % 2 == 0) {
            return Err(Error::InvalidInput(format!(
                "invalid arc label ({a},{b}) for T({p},{q})"
            )));
        }
        let (alo, ahi, _) = arc_exact_data(p, q, a, b)?;
        if verify_oracle {
            verify_arc_against_oracle(p, q, a, b, alo, ahi)?;
        }
        slope_sum += -(p * q);
        intercept = intercept + Angle::of(a, 1);
        lo = lo.max(alo);
        hi = hi.min(ahi);
        end_data.push((alo, i));
        end_data.push((ahi, i));
    }
    if lo >= hi {
        return Ok(None); // empty meridian-range intersection
    }
    let boundary_image = PillowSegment::on_line(
        Slope::integer(slope_sum),
        intercept.rem_two_pi(),
        lo,
        hi,
        false,
        false,
    )
    .unwrap();
    let kind = match (summands.len(), irr.len()) {
        (1, _) => {
            let (a, b) = selection[irr[0]].unwrap();
            StratumKind::IrreducibleArc { a, b }
        }
        (_, 1) => {
            let (a, b) = selection[irr[0]].unwrap();
            StratumKind::HalfAbelian { summand: irr[0], a, b }
        }
        _ => StratumKind::GluedFamily { torus_fiber_dim: irr.len() - 1 },
    };
    let internal_fiber_dim = irr.len() - 1;
    // Adjacency: the arcs whose range ends at an end of the common range
    // abelianize there; the rest persist.
    let mut endpoints = Vec::new();
    for end in [lo, hi] {
        let mut adjacent = selection.clone();
        for &(e, i) in &end_data {
            if e == end {
                adjacent[i] = None;
            }
        }
        let point = boundary_image.point_at(end);
        endpoints.push(EndpointAdjacency { x: end, point, adjacent_selection: adjacent });
    }
    Ok(Some(Stratum {
        piece: piece.to_string(),
        summands: summands.to_vec(),
        selection: selection.clone(),
        kind,
        interior_stabilizer: StabilizerType::Center,
        boundary_image,
        internal_fiber_dim,
        intrinsic_dim: 1 + internal_fiber_dim,
        endpoints,
    }))
}

/// Arc labels (a, b) of the (p, q) torus knot: 1 ≤ a < |p|, 1 ≤ b < q,
/// a ≡ b (mod 2). There are (|p|−1)(q−1)/2 of them.
pub fn arc_labels(p: i64, q: i64) -> Vec<(i64, i64)> {
    let mut out = Vec::new();
    for a in 1..p.abs() {
        for b in 1..q {
            if (a - b) % 2 == 0 {
                out.push((a, b));
            }
        }
    }
    out
}

/// All strata of χ of a composite exterior: the abelian stratum plus one
/// stratum per nonempty arc selection having a nonempty meridian range.
pub fn composite_strata(summands: &[(i64, i64)], verify_oracle: bool) -> Result<Vec<Stratum>> {
    if summands.is_empty() {
        return Err(Error::InvalidInput("need at least one summand".into()));
    }
    if verify_oracle {
        // Verify each distinct arc once, not per selection.
        let mut seen: HashSet<(i64, i64, i64, i64)> = HashSet::new();
        for &(p, q) in summands {
            for (a, b) in arc_labels(p, q) {
                if seen.insert((p, q, a, b)) {
                    let (lo, hi, _) = arc_exact_data(p, q, a, b)?;
                    verify_arc_against_oracle(p, q, a, b, lo, hi)?;
                }
            }
        }
    }
    let piece = piece_label(summands);
    let per_summand: Vec<Vec<Option<(i64, i64)>>> = summands
        .iter()
        .map(|&(p, q)| {
            let mut choices: Vec<Option<(i64, i64)>> = vec![None];
            choices.extend(arc_labels(p, q).into_iter().map(Some));
            choices
        })
        .collect();
    let mut selections: Vec<Selection> = vec![Vec::new()];
    for choices in &per_summand {
        let mut next = Vec::new();
        for partial in &selections {
            for c in choices {
                let mut s = partial.clone();
                s.push(*c);
                next.push(s);
            }
        }
        selections = next;
    }
    let mut out = Vec::new();
    for sel in selections {
        if let Some(st) = stratum_for_selection(summands, &sel, &piece, false)? {
            out.push(st);
        }
    }
    Ok(out)
}

/// Strata of a single torus-knot exterior, oracle-verified.
pub fn knot_strata(p: i64, q: i64) -> Result<Vec<Stratum>> {
    let (p, q) = normalize_knot(p, q);
    composite_strata(&[(p, q)], true)
}

/// T(p, q) with q < 0 is presented as its relabeled copy T(−p, −q).
pub fn normalize_knot(p: i64, q: i64) -> (i64, i64) {
    if q < 0 {
        (-p, -q)
    } else {
        (p, q)
    }
}

pub fn piece_label(summands: &[(i64, i64)]) -> String {
    summands.iter().map(|(p, q)| format!("T({p},{q})")).collect::<Vec<_>>().join("#")
}

/// One side of a splice: the exterior presentation with its strata.
#[derive(Debug, Clone)]
pub struct KnotSide {
    pub summands: Vec<(i64, i64)>,
    pub presentation: Presentation,
    pub strata: Vec<Stratum>,
}

impl KnotSide {
    pub fn new(summands: &[(i64, i64)]) -> Result<KnotSide> {
        let summands: Vec<(i64, i64)> =
            summands.iter().map(|&(p, q)| normalize_knot(p, q)).collect();
        let presentation = Presentation::composite_torus_knot(&summands)?;
        let strata = composite_strata(&summands, true)?;
        Ok(KnotSide { summands, presentation, strata })
    }

    pub fn knot(p: i64, q: i64) -> Result<KnotSide> {
        KnotSide::new(&[(p, q)])
    }

    /// The unknot exterior: a single abelian stratum.
    pub fn unknot() -> KnotSide {
        let mut stratum = abelian_stratum(&[], "unknot");
        stratum.selection = Vec::new();
        KnotSide {
            summands: Vec::new(),
            presentation: Presentation::unknot(),
            strata: vec![stratum],
        }
    }
}

/// A concrete representation realizing a stratum at a meridian angle.
#[derive(Debug, Clone)]
pub struct ArcPoint {
    pub selection: Selection,
    pub x: Angle,
    pub rep: Vec<GroupElement>,
}

/// Builds a representation of the composite exterior at meridian angle
/// `x`, irreducible exactly on the selected summands, with the meridian
/// mapped to e^{x·i} on the nose.
///
/// `internal_phis` rotates the second and later irreducible summands
/// about the meridian axis: these are the internal gluing parameters.
/// The boundary holonomy is checked against the stratum's exact image.
pub fn rep_at(
    side: &KnotSide,
    stratum: &Stratum,
    x: Angle,
    internal_phis: &[f64],
) -> Result<ArcPoint> {
    let (lo, hi, _, _) = stratum.x_range();
    let interior = x > lo && x < hi;
    let endpoint_ok = stratum.is_abelian() && (x == lo || x == hi);
    if !interior && !endpoint_ok {
        return Err(Error::InvalidInput(format!(
            "x = {x} outside the meridian range ({lo}, {hi}) of the stratum"
        )));
    }
    let xf = x.to_f64();
    let mut rep: Vec<GroupElement> = Vec::with_capacity(side.presentation.num_generators);
    if stratum.selection.iter().all(|c| c.is_none()) {
        // Fully abelian: factor through H₁ of the whole exterior. This
        // also covers sides that are not connected sums of torus knots.
        for &e in &side.presentation.abelianization_exponents()? {
            rep.push(GroupElement::exp([1.0, 0.0, 0.0], e as f64 * xf)?);
        }
        return finish_rep(side, stratum, x, rep);
    }
    let mut irr_seen = 0usize;
    for (i, &(p, q)) in side.summands.iter().enumerate() {
        let summand_pres = Presentation::torus_knot(p, q)?;
        match stratum.selection.get(i).copied().flatten() {
            None => {
                let phi = summand_pres.abelianization_exponents()?;
                for &e in &phi {
                    rep.push(GroupElement::exp([1.0, 0.0, 0.0], e as f64 * xf)?);
                }
            }
            Some((a, b)) => {
                let (mut u, mut v) = irreducible_pair(p, q, a, b, xf)?;
                if irr_seen > 0 {
                    let phi = internal_phis.get(irr_seen - 1).copied().unwrap_or(0.0);
                    if phi != 0.0 {
                        let r = GroupElement::from_axis_angle([1.0, 0.0, 0.0], phi)?;
                        u = u.conjugate_by(&r);
                        v = v.conjugate_by(&r);
                    }
                }
                irr_seen += 1;
                rep.push(u);
                rep.push(v);
            }
        }
    }
    finish_rep(side, stratum, x, rep)
}

/// Verifies the boundary holonomy of a constructed representation
/// against the stratum's exact image and wraps it up.
fn finish_rep(
    side: &KnotSide,
    stratum: &Stratum,
    x: Angle,
    rep: Vec<GroupElement>,
) -> Result<ArcPoint> {
    let xf = x.to_f64();
    let per = side.presentation.peripheral.as_ref().unwrap();
    let mu = per.meridian.evaluate(&rep)?;
    let la = per.longitude.evaluate(&rep)?;
    let x_err = wrap_pm_pi(mu.signed_angle_about([1.0, 0.0, 0.0]) - xf).abs();
    if x_err > 1e-9 {
        return Err(Error::Internal(format!("meridian angle off by {x_err:.3e} at x = {x}")));
    }
    let (_, ey) = stratum.boundary_image.lift_at(x);
    let y = la.signed_angle_about([1.0, 0.0, 0.0]);
    let central_x = xf.sin().abs() < 1e-12;
    let y_err = if central_x {
        // On the pillowcase edges the fold y ↦ −y applies.
        wrap_pm_pi(y - ey.to_f64()).abs().min(wrap_pm_pi(y + ey.to_f64()).abs())
    } else {
        wrap_pm_pi(y - ey.to_f64()).abs()
    };
    if y_err > 1e-9 {
        return Err(Error::Internal(format!(
            "longitude angle off the stratum image by {y_err:.3e} at x = {x}"
        )));
    }
    Ok(ArcPoint { selection: stratum.selection.clone(), x, rep })
}

/// The irreducible representation of ⟨u, v | uᵖ = v^q⟩ on the (a, b) arc
/// with meridian angle `x`, conjugated so the meridian is e^{x·i}.
fn irreducible_pair(
    p: i64,
    q: i64,
    a: i64,
    b: i64,
    x: f64,
) -> Result<(GroupElement, GroupElement)> {
    let pres = Presentation::torus_knot(p, q)?;
    let per = pres.peripheral.as_ref().unwrap();
    let sums = per.meridian.exponent_sums(2);
    let (m, n) = (sums[0], sums[1]);
    let alpha = std::f64::consts::PI * a as f64 / p.abs() as f64;
    let beta = std::f64::consts::PI * b as f64 / q as f64;
    let (ma, nb) = (m as f64 * alpha, n as f64 * beta);
    // cos x(t) = cos(mα)cos(nβ) − sin(mα)sin(nβ)·cos t, monotone in t.
    let cos_t = (ma.cos() * nb.cos() - x.cos()) / (ma.sin() * nb.sin());
    if !(-1.0 - 1e-9..=1.0 + 1e-9).contains(&cos_t) {
        return Err(Error::InvalidInput(format!(
            "meridian angle {x} unreachable on arc ({a},{b}) of T({p},{q})"
        )));
    }
    let t = cos_t.clamp(-1.0, 1.0).acos();
    let u = GroupElement::exp([1.0, 0.0, 0.0], alpha)?;
    let v = GroupElement::exp([t.cos(), t.sin(), 0.0], beta)?;
    let mu = per.meridian.evaluate(&[u, v])?;
    let axis = mu
        .axis()
        .ok_or_else(|| Error::Internal("central meridian image on an irreducible arc".into()))?;
    // axis() points along the imaginary part, so the signed angle about it
    // is +x; rotating it onto +i preserves that sign.
    let r = rotation_between(axis, [1.0, 0.0, 0.0]);
    Ok((u.conjugate_by(&r), v.conjugate_by(&r)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::su2::stabilizer_type;
    use std::f64::consts::PI;

    fn ang(n: i64, d: i64) -> Angle {
        Angle::of(n, d)
    }

    fn find_arc(strata: &[Stratum], a: i64, b: i64) -> &Stratum {
        strata
            .iter()
            .find(|s| {
                matches!(s.kind, StratumKind::IrreducibleArc { a: aa, b: bb } if aa == a && bb == b)
            })
            .unwrap()
    }

    #[test]
    fn trace_t35_lies_on_anchored_lift() {
        let trace = trace_arc_numeric(3, 5, 1, 1, 256).unwrap();
        assert_eq!(trace.len(), 256);
        let mut min_x = f64::INFINITY;
        let mut max_x = f64::NEG_INFINITY;
        for &(x, y) in &trace {
            // Lift y = −15(x − π/15) = −15x + π.
            let r = residual_to_line(x, y, -15.0, PI);
            assert!(r < 1e-9, "residual {r:.2e} at x = {x}");
            min_x = min_x.min(x);
            max_x = max_x.max(x);
        }
        assert!((min_x - PI / 15.0).abs() < 1e-6, "inf {min_x}");
        assert!((max_x - 11.0 * PI / 15.0).abs() < 1e-6, "sup {max_x}");
    }

    #[test]
    fn trace_t27_and_mirror() {
        for (p, slope) in [(2i64, -14.0), (-2i64, 14.0)] {
            let trace = trace_arc_numeric(p, 7, 1, 1, 256).unwrap();
            let mut min_x = f64::INFINITY;
            let mut max_x = f64::NEG_INFINITY;
            for &(x, y) in &trace {
                let r = residual_to_line(x, y, slope, PI);
                assert!(r < 1e-9, "T({p},7) residual {r:.2e}");
                min_x = min_x.min(x);
                max_x = max_x.max(x);
            }
            assert!((min_x - PI / 14.0).abs() < 1e-6);
            assert!((max_x - 13.0 * PI / 14.0).abs() < 1e-6);
        }
    }

    #[test]
    fn trace_abelian_limit_kills_longitude() {
        // First grid point: tilt nearly 0, axes align, longitude → 1.
        let trace = trace_arc_numeric(3, 5, 1, 1, 4096).unwrap();
        let (_, y) = trace[0];
        let d = y.min(2.0 * PI - y);
        assert!(d < 1e-4, "longitude angle {y} not near 0 mod 2π");
    }

    #[test]
    fn trace_validates_inputs() {
        assert!(trace_arc_numeric(2, 4, 1, 1, 8).is_err());
        assert!(trace_arc_numeric(3, 5, 1, 2, 8).is_err()); // parity
        assert!(trace_arc_numeric(3, 5, 3, 1, 8).is_err()); // a out of range
    }

    #[test]
    fn t35_strata_counts_and_distinguished_arc() {
        let strata = knot_strata(3, 5).unwrap();
        let arcs: Vec<_> = strata.iter().filter(|s| !s.is_abelian()).collect();
        assert_eq!(arcs.len(), 4);
        assert_eq!(strata.len(), 5);
        let arc = find_arc(&strata, 1, 1);
        let (lo, hi, clo, chi) = arc.x_range();
        assert_eq!((lo, hi), (ang(1, 15), ang(11, 15)));
        assert!(!clo && !chi);
        assert_eq!(arc.boundary_image.slope(), Slope::integer(-15));
        assert_eq!(arc.interior_stabilizer, StabilizerType::Center);
        for e in &arc.endpoints {
            assert!(e.point.y().is_zero(), "endpoint {} off the abelian arc", e.point);
            assert_eq!(e.adjacent_selection, vec![None]);
        }
    }

    #[test]
    fn t27_strata_and_mirror_slopes() {
        let strata = knot_strata(2, 7).unwrap();
        let arcs: Vec<_> = strata.iter().filter(|s| !s.is_abelian()).collect();
        assert_eq!(arcs.len(), 3);
        assert_eq!(arc_labels(2, 7), vec![(1, 1), (1, 3), (1, 5)]);
        let arc = find_arc(&strata, 1, 1);
        assert_eq!(arc.boundary_image.slope(), Slope::integer(-14));
        let (lo, hi, _, _) = arc.x_range();
        assert_eq!((lo, hi), (ang(1, 14), ang(13, 14)));

        let mirror = knot_strata(-2, 7).unwrap();
        for s in mirror.iter().filter(|s| !s.is_abelian()) {
            assert_eq!(s.boundary_image.slope(), Slope::integer(14));
        }
    }

    #[test]
    fn composite_slopes_for_double_mirror_knot() {
        let strata = composite_strata(&[(-2, 7), (-2, 7)], false).unwrap();
        let slopes: Vec<i64> = strata
            .iter()
            .map(|s| match s.boundary_image.slope() {
                Slope::Finite(r) => *r.numer() / *r.denom(),
                Slope::Vertical => unreachable!(),
            })
            .collect();
        assert!(slopes.contains(&0));
        assert!(slopes.contains(&14));
        assert!(slopes.contains(&28));
        // The two half-abelian strata built from the distinguished arcs
        // both span (π/14, 13π/14) with slope 14.
        let halves: Vec<_> = strata
            .iter()
            .filter(|s| {
                matches!(s.kind, StratumKind::HalfAbelian { a: 1, b: 1, .. })
            })
            .collect();
        assert_eq!(halves.len(), 2);
        for h in halves {
            let (lo, hi, _, _) = h.x_range();
            assert_eq!((lo, hi), (ang(1, 14), ang(13, 14)));
            assert_eq!(h.boundary_image.slope(), Slope::integer(14));
        }
        // The distinguished glued family has slope 28 and an S¹ fiber.
        let cyl = strata
            .iter()
            .find(|s| s.selection == vec![Some((1, 1)), Some((1, 1))])
            .unwrap();
        assert_eq!(cyl.boundary_image.slope(), Slope::integer(28));
        assert_eq!(cyl.internal_fiber_dim, 1);
    }

    #[test]
    fn four_summand_family_has_three_torus() {
        let strata = composite_strata(&[(-2, 7), (-2, 7), (-2, 7), (2, 7)], false).unwrap();
        let full = strata
            .iter()
            .find(|s| {
                s.selection
                    == vec![Some((1, 1)), Some((1, 1)), Some((1, 1)), Some((1, 1))]
            })
            .expect("all-irreducible stratum");
        assert_eq!(full.internal_fiber_dim, 3);
        assert!(matches!(full.kind, StratumKind::GluedFamily { torus_fiber_dim: 3 }));
    }

    #[test]
    fn single_summand_passthrough() {
        let via_composite = composite_strata(&[(3, 5)], false).unwrap();
        let direct = knot_strata(3, 5).unwrap();
        assert_eq!(via_composite.len(), direct.len());
        for (a, b) in via_composite.iter().zip(&direct) {
            assert_eq!(a.boundary_image, b.boundary_image);
            assert_eq!(a.kind, b.kind);
        }
    }

    #[test]
    fn rep_at_abelian_endpoint_and_interior() {
        let side = KnotSide::knot(2, 7).unwrap();
        let ab = side.strata.iter().find(|s| s.is_abelian()).unwrap();
        let pt = rep_at(&side, ab, ang(1, 14), &[]).unwrap();
        let mu =
            side.presentation.peripheral.as_ref().unwrap().meridian.evaluate(&pt.rep).unwrap();
        assert!((mu.signed_angle_about([1.0, 0.0, 0.0]) - PI / 14.0).abs() < 1e-12);
        assert_eq!(stabilizer_type(&pt.rep).unwrap(), StabilizerType::Circle);

        let trivial = rep_at(&side, ab, Angle::zero(), &[]).unwrap();
        assert_eq!(stabilizer_type(&trivial.rep).unwrap(), StabilizerType::Full);
    }

    #[test]
    fn rep_at_irreducible_interior() {
        let side = KnotSide::knot(3, 5).unwrap();
        let arc = find_arc(&side.strata, 1, 1);
        let pt = rep_at(&side, arc, ang(1, 14), &[]).unwrap();
        assert_eq!(stabilizer_type(&pt.rep).unwrap(), StabilizerType::Center);
        assert!(rep_at(&side, arc, ang(14, 15), &[]).is_err());
    }

    /// For every stratum of the three exteriors in play and 25 interior
    /// samples, the numeric boundary holonomy lies on the exact image
    /// (rep_at enforces this to 1e−9 internally).
    #[test]
    fn oracle_agreement_across_all_strata() {
        for side in [
            KnotSide::knot(3, 5).unwrap(),
            KnotSide::knot(2, 7).unwrap(),
            KnotSide::new(&[(-2, 7), (-2, 7)]).unwrap(),
        ] {
            for stratum in &side.strata {
                let (lo, hi, _, _) = stratum.x_range();
                for k in 1..=25i64 {
                    let x = lo + (hi - lo).scale(Rational64::new(k, 26));
                    let pt = rep_at(&side, stratum, x, &[]).unwrap();
                    assert!(stratum
                        .boundary_image
                        .contains(&stratum.boundary_image.point_at(x)));
                    let _ = pt;
                }
            }
        }
    }

    #[test]
    fn slope_law_for_composites() {
        let strata = composite_strata(&[(-2, 7), (2, 7)], false).unwrap();
        for s in &strata {
            let want: i64 = s
                .selection
                .iter()
                .enumerate()
                .map(|(i, c)| if c.is_some() { -(s.summands[i].0 * s.summands[i].1) } else { 0 })
                .sum();
            assert_eq!(s.boundary_image.slope(), Slope::integer(want));
        }
    }

    #[test]
    fn glued_family_boundary_is_fiber_independent() {
        let side = KnotSide::new(&[(-2, 7), (-2, 7)]).unwrap();
        let cyl = side
            .strata
            .iter()
            .find(|s| s.selection == vec![Some((1, 1)), Some((1, 1))])
            .unwrap();
        let x = cyl.boundary_image.mid_param();
        for phi in [0.0, 0.8, 2.2] {
            let pt = rep_at(&side, cyl, x, &[phi]).unwrap();
            assert_eq!(stabilizer_type(&pt.rep).unwrap(), StabilizerType::Center);
        }
    }

    #[test]
    fn endpoint_adjacency_of_composites() {
        let side = KnotSide::new(&[(-2, 7), (-2, 7)]).unwrap();
        let half = side
            .strata
            .iter()
            .find(|s| s.selection == vec![Some((1, 3)), None])
            .unwrap();
        let (lo, hi, _, _) = half.x_range();
        assert_eq!((lo, hi), (ang(3, 14), ang(11, 14)));
        for e in &half.endpoints {
            assert_eq!(e.adjacent_selection, vec![None, None]);
        }
        // A mixed family (1,1)&(1,3): at 3π/14 only the (1,3) arc ends.
        let mixed = side
            .strata
            .iter()
            .find(|s| s.selection == vec![Some((1, 1)), Some((1, 3))])
            .unwrap();
        let (lo, hi, _, _) = mixed.x_range();
        assert_eq!((lo, hi), (ang(3, 14), ang(11, 14)));
        let at_lo = mixed.endpoints.iter().find(|e| e.x == lo).unwrap();
        assert_eq!(at_lo.adjacent_selection, vec![Some((1, 1)), None]);
    }

    use num_rational::Rational64;
}
