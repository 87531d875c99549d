//! Exact geometry of the character variety of the 2-torus: the quotient
//! of R² by translations in (2πZ)² and the involution (x, y) ↦ (−x, −y).
//!
//! Every coordinate appearing in this crate is a rational multiple of π,
//! so all quotient geometry (canonical forms, segment intersections,
//! gluing-matrix actions) is carried out exactly over the rationals.

use crate::presentation::GluingMatrix;
use crate::{Error, Result};
use num_rational::Rational64;
use num_traits::Zero;
use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use std::fmt;

/// An angle that is an exact rational multiple of π.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Angle(Rational64);

impl Angle {
    /// (num/den)·π. Fails on a zero denominator.
    pub fn new(num: i64, den: i64) -> Result<Self> {
        if den == 0 {
            return Err(Error::InvalidInput("zero denominator".into()));
        }
        Ok(Angle(Rational64::new(num, den)))
    }

    /// (num/den)·π; panics on a zero denominator. For literals.
    pub fn of(num: i64, den: i64) -> Self {
        Angle::new(num, den).unwrap()
    }

    pub fn zero() -> Self {
        Angle(Rational64::zero())
    }

    pub fn pi() -> Self {
        Angle(Rational64::from_integer(1))
    }

    pub fn two_pi() -> Self {
        Angle(Rational64::from_integer(2))
    }

    pub fn from_ratio(r: Rational64) -> Self {
        Angle(r)
    }

    /// The coefficient of π.
    pub fn ratio(&self) -> Rational64 {
        self.0
    }

    pub fn num(&self) -> i64 {
        *self.0.numer()
    }

    pub fn den(&self) -> i64 {
        *self.0.denom()
    }

    pub fn to_f64(&self) -> f64 {
        (*self.0.numer() as f64) / (*self.0.denom() as f64) * std::f64::consts::PI
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_zero()
    }

    /// Representative in [0, 2π).
    pub fn rem_two_pi(&self) -> Angle {
        let two = Rational64::from_integer(2);
        let mut r = self.0 % two;
        if r < Rational64::zero() {
            r += two;
        }
        Angle(r)
    }

    /// True when the difference with `other` is a multiple of 2π.
    pub fn congruent_two_pi(&self, other: &Angle) -> bool {
        let d = self.0 - other.0;
        (d / Rational64::from_integer(2)).is_integer()
    }

    pub fn scale(&self, k: Rational64) -> Angle {
        Angle(self.0 * k)
    }

    pub fn min(self, other: Angle) -> Angle {
        if self <= other {
            self
        } else {
            other
        }
    }

    pub fn max(self, other: Angle) -> Angle {
        if self >= other {
            self
        } else {
            other
        }
    }
}

impl std::ops::Add for Angle {
    type Output = Angle;
    fn add(self, o: Angle) -> Angle {
        Angle(self.0 + o.0)
    }
}

impl std::ops::Sub for Angle {
    type Output = Angle;
    fn sub(self, o: Angle) -> Angle {
        Angle(self.0 - o.0)
    }
}

impl std::ops::Neg for Angle {
    type Output = Angle;
    fn neg(self) -> Angle {
        Angle(-self.0)
    }
}

impl fmt::Display for Angle {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_zero() {
            write!(f, "0")
        } else if self.0.denom() == &1 {
            write!(f, "{}π", self.0.numer())
        } else {
            write!(f, "{}π/{}", self.0.numer(), self.0.denom())
        }
    }
}

#[derive(Serialize, Deserialize)]
struct AngleRepr {
    num: i64,
    den: i64,
}

impl Serialize for Angle {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        AngleRepr { num: self.num(), den: self.den() }.serialize(s)
    }
}

impl<'de> Deserialize<'de> for Angle {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let r = AngleRepr::deserialize(d)?;
        Angle::new(r.num, r.den).map_err(|e| D::Error::custom(e.to_string()))
    }
}

/// A point of the pillowcase in canonical form:
/// x ∈ [0, π], y ∈ [0, 2π), and y ∈ [0, π] on the edges x ∈ {0, π}.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct PillowPoint {
    x: Angle,
    y: Angle,
}

impl PillowPoint {
    pub fn x(&self) -> Angle {
        self.x
    }

    pub fn y(&self) -> Angle {
        self.y
    }
}

impl fmt::Display for PillowPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.x, self.y)
    }
}

/// Canonical form of the orbit of (x, y) under (2πZ)² and (x,y) ↦ (−x,−y).
pub fn canonicalize(x: Angle, y: Angle) -> PillowPoint {
    let mut x = x.rem_two_pi();
    let mut y = y.rem_two_pi();
    if x > Angle::pi() {
        x = Angle::two_pi() - x;
        y = (-y).rem_two_pi();
    }
    if (x.is_zero() || x == Angle::pi()) && y > Angle::pi() {
        y = Angle::two_pi() - y;
    }
    PillowPoint { x, y }
}

/// Exact equality of pillowcase points presented by arbitrary lifts.
pub fn equivalent(p: (Angle, Angle), q: (Angle, Angle)) -> bool {
    canonicalize(p.0, p.1) == canonicalize(q.0, q.1)
}

/// Slope of a line segment; well defined on the pillowcase because both
/// translations and the central involution preserve it.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Slope {
    Finite(Rational64),
    Vertical,
}

impl Slope {
    pub fn finite(num: i64, den: i64) -> Slope {
        Slope::Finite(Rational64::new(num, den))
    }

    pub fn integer(s: i64) -> Slope {
        Slope::Finite(Rational64::from_integer(s))
    }
}

impl Serialize for Slope {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            Slope::Finite(r) => AngleRepr { num: *r.numer(), den: *r.denom() }.serialize(s),
            Slope::Vertical => "vertical".serialize(s),
        }
    }
}

impl<'de> Deserialize<'de> for Slope {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Repr {
            Finite(AngleRepr),
            Tag(String),
        }
        match Repr::deserialize(d)? {
            Repr::Finite(r) => Ok(Slope::Finite(Rational64::new(r.num, r.den))),
            Repr::Tag(t) if t == "vertical" => Ok(Slope::Vertical),
            Repr::Tag(t) => Err(D::Error::custom(format!("bad slope tag {t:?}"))),
        }
    }
}

/// A line segment on the pillowcase, stored as one lift in R².
///
/// For a finite slope the parameter is the x-coordinate of the lift; for a
/// vertical segment it is the y-coordinate. Endpoints carry open/closed
/// flags.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct PillowSegment {
    base_x: Angle,
    base_y: Angle,
    slope: Slope,
    t_lo: Angle,
    t_hi: Angle,
    closed_lo: bool,
    closed_hi: bool,
}

impl PillowSegment {
    /// Segment of the line through `base` with the given slope, over the
    /// parameter interval [t_lo, t_hi].
    pub fn new(
        base: (Angle, Angle),
        slope: Slope,
        t_lo: Angle,
        t_hi: Angle,
        closed_lo: bool,
        closed_hi: bool,
    ) -> Result<Self> {
        if t_lo > t_hi || (t_lo == t_hi && !(closed_lo && closed_hi)) {
            return Err(Error::InvalidInput(format!("empty parameter range [{t_lo}, {t_hi}]")));
        }
        Ok(PillowSegment { base_x: base.0, base_y: base.1, slope, t_lo, t_hi, closed_lo, closed_hi })
    }

    /// Segment on the line y = slope·x + intercept over an x-interval.
    pub fn on_line(
        slope: Slope,
        intercept: Angle,
        t_lo: Angle,
        t_hi: Angle,
        closed_lo: bool,
        closed_hi: bool,
    ) -> Result<Self> {
        PillowSegment::new((Angle::zero(), intercept), slope, t_lo, t_hi, closed_lo, closed_hi)
    }

    pub fn slope(&self) -> Slope {
        self.slope
    }

    pub fn param_range(&self) -> (Angle, Angle, bool, bool) {
        (self.t_lo, self.t_hi, self.closed_lo, self.closed_hi)
    }

    /// Lift coordinates of the point at parameter `t`.
    pub fn lift_at(&self, t: Angle) -> (Angle, Angle) {
        match self.slope {
            Slope::Finite(s) => (t, self.base_y + (t - self.base_x).scale(s)),
            Slope::Vertical => (self.base_x, t),
        }
    }

    pub fn point_at(&self, t: Angle) -> PillowPoint {
        let (x, y) = self.lift_at(t);
        canonicalize(x, y)
    }

    /// Midpoint parameter of the range.
    pub fn mid_param(&self) -> Angle {
        (self.t_lo + self.t_hi).scale(Rational64::new(1, 2))
    }

    /// For a finite slope, the intercept of the lift line y = s·x + c.
    pub fn intercept(&self) -> Option<Angle> {
        match self.slope {
            Slope::Finite(s) => Some(self.base_y - self.base_x.scale(s)),
            Slope::Vertical => None,
        }
    }

    /// Restriction to a sub-interval of the parameter range (intersected
    /// with the existing range); `None` if the result is empty.
    pub fn clipped(&self, lo: Angle, hi: Angle, closed_lo: bool, closed_hi: bool) -> Option<Self> {
        let r = range_intersection(self.param_range(), (lo, hi, closed_lo, closed_hi))?;
        let mut out = self.clone();
        (out.t_lo, out.t_hi, out.closed_lo, out.closed_hi) = r;
        Some(out)
    }

    fn x_extent(&self) -> (Angle, Angle) {
        match self.slope {
            Slope::Finite(_) => (self.t_lo, self.t_hi),
            Slope::Vertical => (self.base_x, self.base_x),
        }
    }

    fn y_extent(&self) -> (Angle, Angle) {
        match self.slope {
            Slope::Finite(s) => {
                let y0 = self.lift_at(self.t_lo).1;
                let y1 = self.lift_at(self.t_hi).1;
                if s >= Rational64::zero() {
                    (y0, y1)
                } else {
                    (y1, y0)
                }
            }
            Slope::Vertical => (self.t_lo, self.t_hi),
        }
    }

    /// Whether `t` lies in the parameter range, respecting openness.
    pub fn param_in_range(&self, t: Angle) -> bool {
        let lo_ok = t > self.t_lo || (t == self.t_lo && self.closed_lo);
        let hi_ok = t < self.t_hi || (t == self.t_hi && self.closed_hi);
        lo_ok && hi_ok
    }

    /// Exact membership of a pillowcase point, checked across all lifts.
    pub fn contains(&self, p: &PillowPoint) -> bool {
        self.param_of_point(p).is_some()
    }

    /// A parameter whose canonical point equals `p`, if any.
    pub fn param_of_point(&self, p: &PillowPoint) -> Option<Angle> {
        let two_pi = Rational64::from_integer(2);
        for sign in [1i64, -1] {
            let sx = p.x().scale(Rational64::from_integer(sign));
            let sy = p.y().scale(Rational64::from_integer(sign));
            match self.slope {
                Slope::Finite(s) => {
                    let c = self.intercept().unwrap();
                    let k_lo = ((self.t_lo - sx).ratio() / two_pi).ceil().to_integer();
                    let k_hi = ((self.t_hi - sx).ratio() / two_pi).floor().to_integer();
                    for k in k_lo..=k_hi {
                        let x = sx + Angle::from_ratio(two_pi * Rational64::from_integer(k));
                        if !self.param_in_range(x) {
                            continue;
                        }
                        let y_line = x.scale(s) + c;
                        if ((y_line - sy).ratio() / two_pi).is_integer() {
                            return Some(x);
                        }
                    }
                }
                Slope::Vertical => {
                    if !((sx - self.base_x).ratio() / two_pi).is_integer() {
                        continue;
                    }
                    let k_lo = ((self.t_lo - sy).ratio() / two_pi).ceil().to_integer();
                    let k_hi = ((self.t_hi - sy).ratio() / two_pi).floor().to_integer();
                    for k in k_lo..=k_hi {
                        let y = sy + Angle::from_ratio(two_pi * Rational64::from_integer(k));
                        if self.param_in_range(y) {
                            return Some(y);
                        }
                    }
                }
            }
        }
        None
    }
}

/// Applies a gluing matrix to a pillowcase point: a lift (x, y) maps to
/// (ax + by, cx + dy).
pub fn apply_gluing_point(h: &GluingMatrix, p: &PillowPoint) -> PillowPoint {
    let (x, y) = (p.x(), p.y());
    canonicalize(
        x.scale(Rational64::from_integer(h.a)) + y.scale(Rational64::from_integer(h.b)),
        x.scale(Rational64::from_integer(h.c)) + y.scale(Rational64::from_integer(h.d)),
    )
}

/// Applies a gluing matrix to a segment. A finite slope s maps to
/// (c + d·s)/(a + b·s), or to a vertical segment when a + b·s = 0.
pub fn apply_gluing_segment(h: &GluingMatrix, seg: &PillowSegment) -> PillowSegment {
    let m = |p: (Angle, Angle)| -> (Angle, Angle) {
        (
            p.0.scale(Rational64::from_integer(h.a)) + p.1.scale(Rational64::from_integer(h.b)),
            p.0.scale(Rational64::from_integer(h.c)) + p.1.scale(Rational64::from_integer(h.d)),
        )
    };
    let (lo, hi, clo, chi) = seg.param_range();
    let e0 = m(seg.lift_at(lo));
    let e1 = m(seg.lift_at(hi));
    let dx = e1.0 - e0.0;
    let dy = e1.1 - e0.1;
    if dx.is_zero() {
        let (plo, phi, pclo, pchi) =
            if e0.1 <= e1.1 { (e0.1, e1.1, clo, chi) } else { (e1.1, e0.1, chi, clo) };
        PillowSegment::new((e0.0, e0.1), Slope::Vertical, plo, phi, pclo, pchi).unwrap()
    } else {
        let s = dy.ratio() / dx.ratio();
        let (plo, phi, pclo, pchi) =
            if e0.0 <= e1.0 { (e0.0, e1.0, clo, chi) } else { (e1.0, e0.0, chi, clo) };
        PillowSegment::new(e0, Slope::Finite(s), plo, phi, pclo, pchi).unwrap()
    }
}

/// One intersection of two pillowcase segments, with the parameters it
/// occupies on each input's own lift.
#[derive(Debug, Clone)]
pub enum Intersection {
    /// A transverse (or endpoint) meeting point.
    Point { point: PillowPoint, t1: Angle, t2: Angle },
    /// A collinear overlap. `t2_at_lo`/`t2_at_hi` are the parameters on
    /// the second segment matching `t1` at the low/high end (the
    /// correspondence is affine and may reverse orientation).
    Overlap {
        segment: PillowSegment,
        t1_lo: Angle,
        t1_hi: Angle,
        closed_lo: bool,
        closed_hi: bool,
        t2_at_lo: Angle,
        t2_at_hi: Angle,
    },
}

impl Intersection {
    pub fn point(&self) -> Option<&PillowPoint> {
        match self {
            Intersection::Point { point, .. } => Some(point),
            _ => None,
        }
    }
}

struct DeckImage {
    seg: PillowSegment,
    sign: i64,
    shift_param: Angle, // 2πk along the parameter direction
}

impl DeckImage {
    /// Parameter on the original segment for a parameter on this image.
    fn original_param(&self, t: Angle) -> Angle {
        (t - self.shift_param).scale(Rational64::from_integer(self.sign))
    }
}

/// Deck images (involution and lattice translates) of `s2` whose bounding
/// box can meet the bounding box of `s1`'s lift. The exact box bounds make
/// the enumeration complete: a translate outside them cannot intersect.
fn deck_images(s2: &PillowSegment, s1: &PillowSegment) -> Vec<DeckImage> {
    let two_pi = Rational64::from_integer(2);
    let (a1x, b1x) = s1.x_extent();
    let (a1y, b1y) = s1.y_extent();
    let mut out = Vec::new();
    for sign in [1i64, -1] {
        let sgn = Rational64::from_integer(sign);
        let (bx, by) = (s2.base_x.scale(sgn), s2.base_y.scale(sgn));
        let (rlo, rhi, clo, chi) = if sign == 1 {
            (s2.t_lo, s2.t_hi, s2.closed_lo, s2.closed_hi)
        } else {
            (-s2.t_hi, -s2.t_lo, s2.closed_hi, s2.closed_lo)
        };
        let flipped = PillowSegment {
            base_x: bx,
            base_y: by,
            slope: s2.slope,
            t_lo: rlo,
            t_hi: rhi,
            closed_lo: clo,
            closed_hi: chi,
        };
        let (a2x, b2x) = flipped.x_extent();
        let (a2y, b2y) = flipped.y_extent();
        let k1_lo = ((a1x - b2x).ratio() / two_pi).ceil().to_integer();
        let k1_hi = ((b1x - a2x).ratio() / two_pi).floor().to_integer();
        let k2_lo = ((a1y - b2y).ratio() / two_pi).ceil().to_integer();
        let k2_hi = ((b1y - a2y).ratio() / two_pi).floor().to_integer();
        for k1 in k1_lo..=k1_hi {
            for k2 in k2_lo..=k2_hi {
                let dx = Angle::from_ratio(two_pi * Rational64::from_integer(k1));
                let dy = Angle::from_ratio(two_pi * Rational64::from_integer(k2));
                let mut img = flipped.clone();
                img.base_x = img.base_x + dx;
                img.base_y = img.base_y + dy;
                let shift_param = match img.slope {
                    Slope::Finite(_) => {
                        img.t_lo = img.t_lo + dx;
                        img.t_hi = img.t_hi + dx;
                        dx
                    }
                    Slope::Vertical => {
                        img.t_lo = img.t_lo + dy;
                        img.t_hi = img.t_hi + dy;
                        dy
                    }
                };
                out.push(DeckImage { seg: img, sign, shift_param });
            }
        }
    }
    out
}

fn range_intersection(
    a: (Angle, Angle, bool, bool),
    b: (Angle, Angle, bool, bool),
) -> Option<(Angle, Angle, bool, bool)> {
    let (lo, clo) = if a.0 > b.0 {
        (a.0, a.2)
    } else if b.0 > a.0 {
        (b.0, b.2)
    } else {
        (a.0, a.2 && b.2)
    };
    let (hi, chi) = if a.1 < b.1 {
        (a.1, a.3)
    } else if b.1 < a.1 {
        (b.1, b.3)
    } else {
        (a.1, a.3 && b.3)
    };
    if lo > hi || (lo == hi && !(clo && chi)) {
        None
    } else {
        Some((lo, hi, clo, chi))
    }
}

/// All intersections of two segments in the pillowcase, computed exactly.
///
/// Collinear overlaps are returned as sub-segments of the first segment's
/// lift; results are deduplicated, and points covered by an overlap with
/// the matching parameter correspondence are dropped.
pub fn intersect(s1: &PillowSegment, s2: &PillowSegment) -> Vec<Intersection> {
    let mut points: Vec<(PillowPoint, Angle, Angle)> = Vec::new();
    let mut overlaps: Vec<(Angle, Angle, bool, bool, Angle, Angle)> = Vec::new();

    for img in deck_images(s2, s1) {
        match (s1.slope, img.seg.slope) {
            (Slope::Finite(m1), Slope::Finite(m2)) => {
                let c1 = s1.intercept().unwrap();
                let c2 = img.seg.intercept().unwrap();
                if m1 == m2 {
                    if c1 != c2 {
                        continue;
                    }
                    if let Some((lo, hi, clo, chi)) =
                        range_intersection(s1.param_range(), img.seg.param_range())
                    {
                        if lo == hi {
                            points.push((s1.point_at(lo), lo, img.original_param(lo)));
                        } else {
                            overlaps.push((
                                lo,
                                hi,
                                clo,
                                chi,
                                img.original_param(lo),
                                img.original_param(hi),
                            ));
                        }
                    }
                } else {
                    let x = Angle::from_ratio((c2 - c1).ratio() / (m1 - m2));
                    if s1.param_in_range(x) && img.seg.param_in_range(x) {
                        points.push((s1.point_at(x), x, img.original_param(x)));
                    }
                }
            }
            (Slope::Finite(m1), Slope::Vertical) => {
                let x = img.seg.base_x;
                if s1.param_in_range(x) {
                    let y = s1.intercept().unwrap() + x.scale(m1);
                    if img.seg.param_in_range(y) {
                        points.push((s1.point_at(x), x, img.original_param(y)));
                    }
                }
            }
            (Slope::Vertical, Slope::Finite(m2)) => {
                let x = s1.base_x;
                if img.seg.param_in_range(x) {
                    let y = img.seg.intercept().unwrap() + x.scale(m2);
                    if s1.param_in_range(y) {
                        points.push((s1.point_at(y), y, img.original_param(x)));
                    }
                }
            }
            (Slope::Vertical, Slope::Vertical) => {
                if s1.base_x != img.seg.base_x {
                    continue;
                }
                if let Some((lo, hi, clo, chi)) =
                    range_intersection(s1.param_range(), img.seg.param_range())
                {
                    if lo == hi {
                        points.push((s1.point_at(lo), lo, img.original_param(lo)));
                    } else {
                        overlaps.push((
                            lo,
                            hi,
                            clo,
                            chi,
                            img.original_param(lo),
                            img.original_param(hi),
                        ));
                    }
                }
            }
        }
    }

    overlaps.sort();
    overlaps.dedup();
    // Drop overlaps contained in a longer one with the same correspondence.
    let mut keep_overlaps: Vec<(Angle, Angle, bool, bool, Angle, Angle)> = Vec::new();
    for o in &overlaps {
        let contained = overlaps.iter().any(|p| {
            if p == o {
                return false;
            }
            let inside = p.0 <= o.0 && o.1 <= p.1 && !(p.0 == o.0 && p.1 == o.1);
            inside && map_matches(p, o.0, o.4) && map_matches(p, o.1, o.5)
        });
        if !contained {
            keep_overlaps.push(*o);
        }
    }

    points.sort_by_key(|a| (a.1, a.2));
    points.dedup_by(|a, b| a.1 == b.1 && a.2 == b.2);
    let mut out: Vec<Intersection> = Vec::new();
    for (p, t1, t2) in points {
        let on_overlap =
            keep_overlaps.iter().any(|o| o.0 <= t1 && t1 <= o.1 && map_matches(o, t1, t2));
        if !on_overlap {
            out.push(Intersection::Point { point: p, t1, t2 });
        }
    }
    for (lo, hi, clo, chi, t2lo, t2hi) in keep_overlaps {
        let seg = PillowSegment {
            base_x: s1.base_x,
            base_y: s1.base_y,
            slope: s1.slope,
            t_lo: lo,
            t_hi: hi,
            closed_lo: clo,
            closed_hi: chi,
        };
        out.push(Intersection::Overlap {
            segment: seg,
            t1_lo: lo,
            t1_hi: hi,
            closed_lo: clo,
            closed_hi: chi,
            t2_at_lo: t2lo,
            t2_at_hi: t2hi,
        });
    }
    out
}

/// Whether the affine correspondence of an overlap sends t1 to t2.
fn map_matches(o: &(Angle, Angle, bool, bool, Angle, Angle), t1: Angle, t2: Angle) -> bool {
    let (lo, hi, _, _, mlo, mhi) = *o;
    if hi == lo {
        return t1 == lo && t2 == mlo;
    }
    let lambda = (t1 - lo).ratio() / (hi - lo).ratio();
    let expect = mlo + (mhi - mlo).scale(lambda);
    t2 == expect
}
