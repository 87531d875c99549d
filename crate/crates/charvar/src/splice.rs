//! Fiber products of character-variety strata over the pillowcase,
//! gluing-parameter spaces, component assembly, local links of singular
//! points, Zariski tangent dimensions, and the census of components.
//!
//! For a splice Σ = X ∪_h Y, a character of Σ is determined by a pair of
//! characters of the two sides with matching boundary images, together
//! with a point of the double coset Stab(ρ_X) \ Stab(ρ_∂X) / Stab(ρ_Y)
//! (the gluing parameters). The loci below enumerate exactly the matched
//! pairs; the fibers account for the double cosets and for the internal
//! gluing tori of composite sides.

use crate::arcs::{rep_at, KnotSide, Selection, Stratum};
use crate::cohomology::{
    bending_dim, h1_dim, mv_h1, rank_difference_map, CohomologyReport,
};
use crate::pillowcase::{
    apply_gluing_segment, intersect, Angle, Intersection, PillowPoint,
    PillowSegment,
};
use crate::presentation::{GluingMatrix, Presentation};
use crate::su2::{GroupElement, StabilizerType};
use crate::{Error, Result};
use num_rational::Rational64;
use serde::{Deserialize, Serialize};
use std::collections::{BTreeMap, HashMap};

/// The space of gluing parameters at one matched pair: the double coset
/// space Stab_left \ Stab_boundary / Stab_right.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum GlueSpace {
    Point,
    Circle,
    /// SU(2)/{±1} for an irreducible pair over a central boundary.
    SO3,
    /// Product torus carried by composite sides (internal parameters).
    TorusFiber(usize),
}

impl GlueSpace {
    pub fn dim(&self) -> usize {
        match self {
            GlueSpace::Point => 0,
            GlueSpace::Circle => 1,
            GlueSpace::SO3 => 3,
            GlueSpace::TorusFiber(k) => *k,
        }
    }
}

/// Double-coset case table. The boundary restriction of either side is
/// abelian, so the boundary stabilizer is never {±1}; side stabilizers
/// embed in the boundary stabilizer.
pub fn gluing_parameter_space(
    left: StabilizerType,
    boundary: StabilizerType,
    right: StabilizerType,
) -> Result<GlueSpace> {
    use StabilizerType::*;
    match (left, boundary, right) {
        (Full, Full, _) | (_, Full, Full) => Ok(GlueSpace::Point),
        (Center, Full, Center) => Ok(GlueSpace::SO3),
        (Center, Circle, Center) => Ok(GlueSpace::Circle),
        (Center, Circle, Circle) | (Circle, Circle, Center) => Ok(GlueSpace::Point),
        (Circle, Circle, Circle) => Ok(GlueSpace::Point),
        (Circle, Full, _) | (_, Full, Circle) => Err(Error::Internal(
            "abelian non-central side over a central boundary is impossible".into(),
        )),
        (Full, Circle, _) | (_, Circle, Full) | (_, Center, _) => Err(Error::Internal(format!(
            "stabilizer containment violated: ({left:?}, {boundary:?}, {right:?})"
        ))),
    }
}

/// Geometry of one locus of the fiber product, with the parameters it
/// occupies on the two sides (meridian angles of the respective strata).
#[derive(Debug, Clone, Serialize, Deserialize)]
pub enum LocusGeometry {
    Point {
        point: PillowPoint,
        left_x: Angle,
        right_x: Angle,
    },
    Segment {
        /// Sub-segment of the left stratum's image (its lift).
        segment: PillowSegment,
        left_lo: Angle,
        left_hi: Angle,
        right_at_lo: Angle,
        right_at_hi: Angle,
    },
}

impl LocusGeometry {
    pub fn dim(&self) -> usize {
        match self {
            LocusGeometry::Point { .. } => 0,
            LocusGeometry::Segment { .. } => 1,
        }
    }
}

/// One matched locus of the fiber product over the pillowcase.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct FiberLocus {
    pub left_stratum: usize,
    pub right_stratum: usize,
    pub geometry: LocusGeometry,
    /// Interface double coset at interior points of the locus.
    pub interface: GlueSpace,
    /// Internal gluing-torus dimension carried by the two strata.
    pub internal_dim: usize,
    /// Whether the boundary identification uses the involution sheet.
    pub flipped: bool,
    /// Total dimension: geometry + interface + internal tori.
    pub dim: usize,
}

impl FiberLocus {
    pub fn fiber_dim(&self) -> usize {
        self.interface.dim() + self.internal_dim
    }

    /// A canonical pillowcase point of the locus (the point itself, or
    /// the midpoint of a segment locus).
    pub fn representative_point(&self) -> PillowPoint {
        match &self.geometry {
            LocusGeometry::Point { point, .. } => *point,
            LocusGeometry::Segment { segment, .. } => segment.point_at(segment.mid_param()),
        }
    }
}

/// Identity of a character of one side: the (possibly abelianized)
/// selection and the meridian angle.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
pub struct CharId {
    pub selection: Selection,
    pub x: Angle,
}

/// Sided pair identifying a point of the fiber product.
pub type CharPair = (CharId, CharId);

/// Piece of the link of a singular point.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub enum LinkPiece {
    PointPair,
    Circle,
    Torus(usize),
    Sphere(usize),
}

impl LinkPiece {
    fn of_fiber_dim(d: usize) -> Option<LinkPiece> {
        match d {
            1 => Some(LinkPiece::Circle),
            d if d >= 2 => Some(LinkPiece::Torus(d)),
            _ => None,
        }
    }
}

/// The link of a 0-dimensional piece inside its component.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct LinkDescription {
    pub pieces: Vec<LinkPiece>,
    /// Expected local dimension (the component dimension).
    pub expected_dim: usize,
    /// True exactly when the link is a single sphere of dimension
    /// expected_dim − 1 (with the empty link allowed at dimension 0).
    pub manifold: bool,
    /// False when the incident data falls outside the recognized table.
    pub classified: bool,
}

fn sphere_of_dim(d: usize) -> LinkPiece {
    match d {
        0 => LinkPiece::PointPair,
        1 => LinkPiece::Circle,
        k => LinkPiece::Sphere(k),
    }
}

/// Adjacency of a segment locus end to a 0-dimensional locus.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Adjacency {
    pub segment: usize,
    pub at_high_end: bool,
    pub point: usize,
    /// Fiber dimensions lost in the limit (collapse of gluing circles
    /// and internal tori when a side abelianizes).
    pub fiber_collapse: usize,
}

/// One path component of the character variety of the splice.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Component {
    pub loci: Vec<usize>,
    pub adjacency: Vec<Adjacency>,
    /// Segment loci whose limit lands in the interior of another segment
    /// locus (`point` then names the host segment). Components with such
    /// attachments are reported unclassified.
    pub interior_attachments: Vec<Adjacency>,
    pub dim: usize,
    pub topology: String,
    pub morse_bott: bool,
    /// Zariski tangent dimensions at the sampled points.
    pub zariski_samples: Vec<usize>,
    /// Links at every 0-dimensional locus of the component.
    pub links: Vec<(usize, LinkDescription)>,
    /// True for the component of the trivial character.
    pub trivial_character: bool,
    /// Set when any rank computation along the way was flagged.
    pub provisional: bool,
}

/// Runs the fiber product of two stratum lists over the gluing matrix:
/// intersects every left image with the glued right image, splits loci at
/// stabilizer jumps, and attaches the gluing-parameter data.
pub fn fiber_product(
    left: &[Stratum],
    right: &[Stratum],
    h: &GluingMatrix,
) -> Result<Vec<FiberLocus>> {
    let hinv = h.inverse();
    let mut loci = Vec::new();
    for (li, ls) in left.iter().enumerate() {
        for (ri, rs) in right.iter().enumerate() {
            let image = apply_gluing_segment(h, &rs.boundary_image);
            for hit in intersect(&ls.boundary_image, &image) {
                match hit {
                    Intersection::Point { point, t1, t2 } => {
                        let right_lift = image.lift_at(t2);
                        let right_x = back_param(&hinv, right_lift, &rs.boundary_image)?;
                        let flipped = detect_flip(&ls.boundary_image, t1, &image, t2)?;
                        loci.push(make_point_locus(
                            li, ls, ri, rs, point, t1, right_x, flipped,
                        )?);
                    }
                    Intersection::Overlap {
                        segment,
                        t1_lo,
                        t1_hi,
                        closed_lo,
                        closed_hi,
                        t2_at_lo,
                        t2_at_hi,
                    } => {
                        let r_lo = back_param(&hinv, image.lift_at(t2_at_lo), &rs.boundary_image)?;
                        let r_hi = back_param(&hinv, image.lift_at(t2_at_hi), &rs.boundary_image)?;
                        let mid = (t1_lo + t1_hi).scale(Rational64::new(1, 2));
                        let t2_mid = (t2_at_lo + t2_at_hi).scale(Rational64::new(1, 2));
                        let flipped =
                            detect_flip(&ls.boundary_image, mid, &image, t2_mid)?;
                        // Split at parameters where the boundary character
                        // becomes central (stabilizer jump).
                        let splits = central_params_within(&segment);
                        let mut cuts = vec![(t1_lo, closed_lo)];
                        for s in splits {
                            if s > t1_lo && s < t1_hi {
                                cuts.push((s, false));
                            }
                        }
                        cuts.push((t1_hi, closed_hi));
                        for w in 0..cuts.len() - 1 {
                            let (lo, clo) = cuts[w];
                            let (hi, chi) = cuts[w + 1];
                            let sub = segment
                                .clipped(lo, hi, clo, chi)
                                .ok_or_else(|| Error::Internal("empty split piece".into()))?;
                            let frac = |t: Angle| {
                                (t - t1_lo).ratio() / (t1_hi - t1_lo).ratio()
                            };
                            let r_of = |t: Angle| {
                                r_lo + (r_hi - r_lo).scale(frac(t))
                            };
                            loci.push(make_segment_locus(
                                li,
                                ls,
                                ri,
                                rs,
                                sub,
                                lo,
                                hi,
                                r_of(lo),
                                r_of(hi),
                                flipped,
                            )?);
                            // Central split points become their own loci.
                            if w + 2 < cuts.len() {
                                let t = cuts[w + 1].0;
                                let point = segment.point_at(t);
                                loci.push(make_point_locus(
                                    li,
                                    ls,
                                    ri,
                                    rs,
                                    point,
                                    t,
                                    r_of(t),
                                    flipped,
                                )?);
                            }
                        }
                    }
                }
            }
        }
    }
    check_disjoint(&loci)?;
    Ok(loci)
}

#[allow(clippy::too_many_arguments)]
fn make_point_locus(
    li: usize,
    ls: &Stratum,
    ri: usize,
    rs: &Stratum,
    point: PillowPoint,
    left_x: Angle,
    right_x: Angle,
    flipped: bool,
) -> Result<FiberLocus> {
    let boundary = boundary_stabilizer(&point);
    let sl = ls.stabilizer_at(left_x);
    let sr = rs.stabilizer_at(right_x);
    let interface = gluing_parameter_space(sl, boundary, sr)?;
    let internal_dim = ls.internal_fiber_dim + rs.internal_fiber_dim;
    Ok(FiberLocus {
        left_stratum: li,
        right_stratum: ri,
        geometry: LocusGeometry::Point { point, left_x, right_x },
        interface,
        internal_dim,
        flipped,
        dim: interface.dim() + internal_dim,
    })
}

#[allow(clippy::too_many_arguments)]
fn make_segment_locus(
    li: usize,
    ls: &Stratum,
    ri: usize,
    rs: &Stratum,
    segment: PillowSegment,
    left_lo: Angle,
    left_hi: Angle,
    right_at_lo: Angle,
    right_at_hi: Angle,
    flipped: bool,
) -> Result<FiberLocus> {
    let mid = segment.mid_param();
    let boundary = boundary_stabilizer(&segment.point_at(mid));
    let r_mid = right_at_lo + (right_at_hi - right_at_lo).scale(Rational64::new(1, 2));
    let sl = ls.stabilizer_at(mid);
    let sr = rs.stabilizer_at(r_mid);
    let interface = gluing_parameter_space(sl, boundary, sr)?;
    let internal_dim = ls.internal_fiber_dim + rs.internal_fiber_dim;
    Ok(FiberLocus {
        left_stratum: li,
        right_stratum: ri,
        geometry: LocusGeometry::Segment {
            segment,
            left_lo,
            left_hi,
            right_at_lo,
            right_at_hi,
        },
        interface,
        internal_dim,
        flipped,
        dim: 1 + interface.dim() + internal_dim,
    })
}

/// Stabilizer of the boundary character at a canonical pillowcase point:
/// central exactly when both holonomy angles are multiples of π.
fn boundary_stabilizer(p: &PillowPoint) -> StabilizerType {
    let central = |a: Angle| a.is_zero() || a == Angle::pi();
    if central(p.x()) && central(p.y()) {
        StabilizerType::Full
    } else {
        StabilizerType::Circle
    }
}

/// Parameters of a segment where the boundary character is central.
fn central_params_within(seg: &PillowSegment) -> Vec<Angle> {
    let (lo, hi, _, _) = seg.param_range();
    let mut out = Vec::new();
    // Central points have both lift coordinates ≡ 0 mod π.
    let k_lo = lo.ratio().ceil().to_integer();
    let k_hi = hi.ratio().floor().to_integer();
    for k in k_lo..=k_hi {
        let t = Angle::of(k, 1);
        if !seg.param_in_range(t) {
            continue;
        }
        let (x, y) = seg.lift_at(t);
        if x.ratio().is_integer() && y.ratio().is_integer() {
            out.push(t);
        }
    }
    out
}

/// Recovers the right stratum's own meridian parameter from a lift point
/// of the glued image.
fn back_param(
    hinv: &GluingMatrix,
    image_lift: (Angle, Angle),
    right_image: &PillowSegment,
) -> Result<Angle> {
    let x = image_lift.0.scale(Rational64::from_integer(hinv.a))
        + image_lift.1.scale(Rational64::from_integer(hinv.b));
    let y = image_lift.0.scale(Rational64::from_integer(hinv.c))
        + image_lift.1.scale(Rational64::from_integer(hinv.d));
    let param = match right_image.slope() {
        crate::pillowcase::Slope::Finite(_) => x,
        crate::pillowcase::Slope::Vertical => y,
    };
    // Open endpoints of overlaps evaluate to limit values, so validate
    // against the closed hull only.
    let (lo, hi, _, _) = right_image.param_range();
    if param < lo || param > hi {
        return Err(Error::Internal(format!(
            "recovered right parameter {param} outside the stratum range"
        )));
    }
    Ok(param)
}

/// Whether the identification of the two lifts at matched parameters
/// goes through the involution sheet.
fn detect_flip(
    s1: &PillowSegment,
    t1: Angle,
    image: &PillowSegment,
    t2: Angle,
) -> Result<bool> {
    let p1 = s1.lift_at(t1);
    let p2 = image.lift_at(t2);
    let is_lattice = |a: Angle, b: Angle| ((a - b).ratio() / Rational64::from_integer(2)).is_integer();
    let plain = is_lattice(p1.0, p2.0) && is_lattice(p1.1, p2.1);
    if plain {
        return Ok(false);
    }
    let flip = is_lattice(p1.0, -p2.0) && is_lattice(p1.1, -p2.1);
    if flip {
        return Ok(true);
    }
    Err(Error::Internal("matched parameters are not deck-equivalent".into()))
}

/// Pairwise disjointness of loci as subsets of the fiber product.
fn check_disjoint(loci: &[FiberLocus]) -> Result<()> {
    for (i, a) in loci.iter().enumerate() {
        for b in loci.iter().skip(i + 1) {
            if a.left_stratum != b.left_stratum || a.right_stratum != b.right_stratum {
                continue;
            }
            let clash = match (&a.geometry, &b.geometry) {
                (
                    LocusGeometry::Point { left_x: ax, right_x: arx, .. },
                    LocusGeometry::Point { left_x: bx, right_x: brx, .. },
                ) => ax == bx && arx == brx,
                (
                    LocusGeometry::Point { left_x, right_x, .. },
                    LocusGeometry::Segment { segment, left_lo, left_hi, right_at_lo, right_at_hi, .. },
                )
                | (
                    LocusGeometry::Segment { segment, left_lo, left_hi, right_at_lo, right_at_hi, .. },
                    LocusGeometry::Point { left_x, right_x, .. },
                ) => {
                    segment.param_in_range(*left_x) && {
                        let frac = (*left_x - *left_lo).ratio() / (*left_hi - *left_lo).ratio();
                        let expect = *right_at_lo + (*right_at_hi - *right_at_lo).scale(frac);
                        expect == *right_x
                    }
                }
                (
                    LocusGeometry::Segment { left_lo: alo, left_hi: ahi, right_at_lo: arlo, right_at_hi: arhi, .. },
                    LocusGeometry::Segment { left_lo: blo, left_hi: bhi, right_at_lo: brlo, right_at_hi: brhi, .. },
                ) => {
                    let lo = (*alo).max(*blo);
                    let hi = (*ahi).min(*bhi);
                    lo < hi && {
                        // The two affine correspondences t1 ↦ right_x meet
                        // where their difference vanishes; a zero inside
                        // the common interval (equal maps, or a crossing
                        // between orientation-reversed decks) means the
                        // loci share fiber-product points.
                        let r_at = |t: Angle,
                                    l0: Angle,
                                    l1: Angle,
                                    r0: Angle,
                                    r1: Angle| {
                            r0 + (r1 - r0).scale((t - l0).ratio() / (l1 - l0).ratio())
                        };
                        let d_lo = r_at(lo, *alo, *ahi, *arlo, *arhi)
                            - r_at(lo, *blo, *bhi, *brlo, *brhi);
                        let d_hi = r_at(hi, *alo, *ahi, *arlo, *arhi)
                            - r_at(hi, *blo, *bhi, *brlo, *brhi);
                        d_lo.is_zero()
                            || d_hi.is_zero()
                            || (d_lo.ratio() < Rational64::from_integer(0))
                                != (d_hi.ratio() < Rational64::from_integer(0))
                    }
                }
            };
            if clash {
                return Err(Error::Internal(format!(
                    "overlapping loci in the fiber product: {a:?} vs {b:?}"
                )));
            }
        }
    }
    Ok(())
}

/// Limit character of one side of a segment locus at one of its ends.
fn limit_char(stratum: &Stratum, x: Angle) -> CharId {
    for e in &stratum.endpoints {
        if e.x == x {
            return CharId { selection: e.adjacent_selection.clone(), x };
        }
    }
    CharId { selection: stratum.selection.clone(), x }
}

fn locus_char_pair(loci: &[FiberLocus], left: &[Stratum], right: &[Stratum], i: usize) -> CharPair {
    let l = &loci[i];
    match &l.geometry {
        LocusGeometry::Point { left_x, right_x, .. } => (
            CharId { selection: left[l.left_stratum].selection.clone(), x: *left_x },
            CharId { selection: right[l.right_stratum].selection.clone(), x: *right_x },
        ),
        LocusGeometry::Segment { .. } => unreachable!("only point loci have a single pair"),
    }
}

/// The completed splice analysis: loci, components, links, dimensions.
pub struct SpliceAnalysis {
    pub left: KnotSide,
    pub right: KnotSide,
    pub h: GluingMatrix,
    pub spliced: Presentation,
    pub loci: Vec<FiberLocus>,
    pub components: Vec<Component>,
    with_zariski: bool,
}

/// Outcome of the two-route Zariski tangent computation at one point.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ZariskiOutcome {
    pub dim: usize,
    pub direct: CohomologyReport,
    pub left_report: CohomologyReport,
    pub right_report: CohomologyReport,
    pub rank_difference: usize,
    pub bending: usize,
    pub provisional: bool,
}

impl SpliceAnalysis {
    pub fn new(left: KnotSide, right: KnotSide, h: GluingMatrix) -> Result<SpliceAnalysis> {
        Self::build(left, right, h, true)
    }

    /// Assembly, topology and links only — skips the Zariski sampling.
    pub fn geometry_only(
        left: KnotSide,
        right: KnotSide,
        h: GluingMatrix,
    ) -> Result<SpliceAnalysis> {
        Self::build(left, right, h, false)
    }

    fn build(
        left: KnotSide,
        right: KnotSide,
        h: GluingMatrix,
        with_zariski: bool,
    ) -> Result<SpliceAnalysis> {
        let spliced = left.presentation.splice(&right.presentation, &h)?;
        let loci = fiber_product(&left.strata, &right.strata, &h)?;
        let mut analysis =
            SpliceAnalysis { left, right, h, spliced, loci, components: Vec::new(), with_zariski };
        analysis.assemble_components()?;
        Ok(analysis)
    }

    /// Union-find assembly of loci into path components, matching limit
    /// characters of segment loci to the loci containing them.
    fn assemble_components(&mut self) -> Result<()> {
        let n = self.loci.len();
        let mut parent: Vec<usize> = (0..n).collect();
        fn find(parent: &mut Vec<usize>, i: usize) -> usize {
            if parent[i] != i {
                let r = find(parent, parent[i]);
                parent[i] = r;
            }
            parent[i]
        }
        fn union(parent: &mut Vec<usize>, a: usize, b: usize) {
            let (ra, rb) = (find(parent, a), find(parent, b));
            if ra != rb {
                parent[ra] = rb;
            }
        }
        // Index 0-dimensional loci by their character pair.
        let mut by_pair: HashMap<String, usize> = HashMap::new();
        for i in 0..n {
            if matches!(self.loci[i].geometry, LocusGeometry::Point { .. }) {
                let pair = locus_char_pair(&self.loci, &self.left.strata, &self.right.strata, i);
                by_pair.insert(format!("{pair:?}"), i);
            }
        }
        let mut adjacency: Vec<Adjacency> = Vec::new();
        let mut interior: Vec<Adjacency> = Vec::new();
        for i in 0..n {
            let (ends, fiber) = match &self.loci[i].geometry {
                LocusGeometry::Segment {
                    segment,
                    left_lo,
                    left_hi,
                    right_at_lo,
                    right_at_hi,
                } => {
                    let (_, _, clo, chi) = segment.param_range();
                    let mut ends = Vec::new();
                    if !clo {
                        ends.push((false, *left_lo, *right_at_lo));
                    }
                    if !chi {
                        ends.push((true, *left_hi, *right_at_hi));
                    }
                    (ends, self.loci[i].fiber_dim())
                }
                LocusGeometry::Point { .. } => continue,
            };
            for (at_high_end, lx, rx) in ends {
                let lim = (
                    limit_char(&self.left.strata[self.loci[i].left_stratum], lx),
                    limit_char(&self.right.strata[self.loci[i].right_stratum], rx),
                );
                let key = format!("{lim:?}");
                if let Some(&pt) = by_pair.get(&key) {
                    union(&mut parent, i, pt);
                    let collapse = fiber.saturating_sub(self.loci[pt].fiber_dim());
                    adjacency.push(Adjacency {
                        segment: i,
                        at_high_end,
                        point: pt,
                        fiber_collapse: collapse,
                    });
                    continue;
                }
                // The limit may sit in the interior of another segment
                // locus (partial abelianization of a larger family).
                let Some(host) = self.find_hosting_segment(&lim) else {
                    return Err(Error::Internal(format!(
                        "limit point of a segment locus is not itself a locus: {lim:?}"
                    )));
                };
                union(&mut parent, i, host);
                let collapse = fiber.saturating_sub(self.loci[host].fiber_dim());
                interior.push(Adjacency {
                    segment: i,
                    at_high_end,
                    point: host,
                    fiber_collapse: collapse,
                });
            }
        }
        // Gather components.
        let mut groups: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
        for i in 0..n {
            groups.entry(find(&mut parent, i)).or_default().push(i);
        }
        let mut components = Vec::new();
        for (_, loci_idx) in groups {
            let adj: Vec<Adjacency> = adjacency
                .iter()
                .filter(|a| loci_idx.contains(&a.segment))
                .cloned()
                .collect();
            let inner: Vec<Adjacency> = interior
                .iter()
                .filter(|a| loci_idx.contains(&a.segment))
                .cloned()
                .collect();
            components.push(self.analyze_component(loci_idx, adj, inner)?);
        }
        // Deterministic order: by minimal representative point.
        components.sort_by_key(|c| {
            c.loci
                .iter()
                .map(|&i| self.loci[i].representative_point())
                .min()
                .unwrap()
        });
        self.components = components;
        Ok(())
    }

    /// Segment locus whose interior contains the given character pair.
    fn find_hosting_segment(&self, lim: &CharPair) -> Option<usize> {
        self.loci.iter().position(|l| {
            let LocusGeometry::Segment { segment, left_lo, left_hi, right_at_lo, right_at_hi } =
                &l.geometry
            else {
                return false;
            };
            let ls = &self.left.strata[l.left_stratum];
            let rs = &self.right.strata[l.right_stratum];
            ls.selection == lim.0.selection
                && rs.selection == lim.1.selection
                && segment.param_in_range(lim.0.x)
                && {
                    let frac = (lim.0.x - *left_lo).ratio() / (*left_hi - *left_lo).ratio();
                    *right_at_lo + (*right_at_hi - *right_at_lo).scale(frac) == lim.1.x
                }
        })
    }

    fn analyze_component(
        &self,
        loci_idx: Vec<usize>,
        adjacency: Vec<Adjacency>,
        interior_attachments: Vec<Adjacency>,
    ) -> Result<Component> {
        let dim = loci_idx.iter().map(|&i| self.loci[i].dim).max().unwrap_or(0);
        let trivial_character = loci_idx.len() == 1
            && matches!(
                &self.loci[loci_idx[0]].geometry,
                LocusGeometry::Point { point, .. } if point.x().is_zero() && point.y().is_zero()
            );
        // Links at every 0-dimensional locus.
        let mut links = Vec::new();
        for &i in &loci_idx {
            if !matches!(self.loci[i].geometry, LocusGeometry::Point { .. }) {
                continue;
            }
            links.push((i, self.classify_link_at(&loci_idx, &adjacency, i, dim)?));
        }
        // Zariski samples: every 0-dimensional locus, and quartile points
        // of every segment locus; fibered loci get extra fiber samples.
        let mut zariski_samples = Vec::new();
        let mut provisional = false;
        let sampled: &[usize] = if self.with_zariski { &loci_idx } else { &[] };
        for &i in sampled {
            match &self.loci[i].geometry {
                LocusGeometry::Point { .. } => {
                    let phis: &[f64] =
                        if self.loci[i].fiber_dim() > 0 { &[0.0, 1.1, 2.4] } else { &[0.0] };
                    for &phi in phis {
                        let z = self.zariski_at(i, None, phi)?;
                        provisional |= z.provisional;
                        zariski_samples.push(z.dim);
                    }
                }
                LocusGeometry::Segment { left_lo, left_hi, .. } => {
                    for k in [1i64, 2, 3] {
                        let x = *left_lo + (*left_hi - *left_lo).scale(Rational64::new(k, 4));
                        let z = self.zariski_at(i, Some(x), 0.0)?;
                        provisional |= z.provisional;
                        zariski_samples.push(z.dim);
                    }
                }
            }
        }
        let morse_bott = self.with_zariski
            && interior_attachments.is_empty()
            && links.iter().all(|(_, l)| l.manifold)
            && zariski_samples.iter().all(|&z| z == dim);
        let topology = if interior_attachments.is_empty() {
            self.topology_name(&loci_idx, &adjacency)
        } else {
            "unclassified".to_string()
        };
        Ok(Component {
            loci: loci_idx,
            adjacency,
            interior_attachments,
            dim,
            topology,
            morse_bott,
            zariski_samples,
            links,
            trivial_character,
            provisional,
        })
    }

    /// Names the component when it matches the recognized case table;
    /// anything else is reported "unclassified".
    fn topology_name(&self, loci_idx: &[usize], adjacency: &[Adjacency]) -> String {
        let segs: Vec<usize> = loci_idx
            .iter()
            .copied()
            .filter(|&i| matches!(self.loci[i].geometry, LocusGeometry::Segment { .. }))
            .collect();
        let pts: Vec<usize> = loci_idx
            .iter()
            .copied()
            .filter(|&i| matches!(self.loci[i].geometry, LocusGeometry::Point { .. }))
            .collect();
        match (segs.len(), pts.len()) {
            (0, 1) => {
                let d = self.loci[pts[0]].fiber_dim();
                match d {
                    0 => "point".to_string(),
                    1 => "circle".to_string(),
                    k => format!("{k}-torus"),
                }
            }
            (1, 2) => {
                let all_circle_fibers = self.loci[segs[0]].fiber_dim() == 1;
                let caps_are_points = pts.iter().all(|&p| self.loci[p].fiber_dim() == 0);
                let both_ends = adjacency.len() == 2
                    && adjacency.iter().any(|a| !a.at_high_end)
                    && adjacency.iter().any(|a| a.at_high_end);
                if all_circle_fibers && caps_are_points && both_ends {
                    "sphere".to_string()
                } else {
                    "unclassified".to_string()
                }
            }
            (2, 3) => {
                // Two spheres sharing exactly one point.
                let fibers_ok = segs.iter().all(|&s| self.loci[s].fiber_dim() == 1)
                    && pts.iter().all(|&p| self.loci[p].fiber_dim() == 0);
                let mut incident: BTreeMap<usize, usize> = BTreeMap::new();
                for a in adjacency {
                    *incident.entry(a.point).or_default() += 1;
                }
                let counts: Vec<usize> = pts
                    .iter()
                    .map(|p| incident.get(p).copied().unwrap_or(0))
                    .collect();
                let mut sorted = counts.clone();
                sorted.sort_unstable();
                if fibers_ok && adjacency.len() == 4 && sorted == vec![1, 1, 2] {
                    "wedge of two 2-spheres".to_string()
                } else {
                    "unclassified".to_string()
                }
            }
            _ => "unclassified".to_string(),
        }
    }

    /// Link of a 0-dimensional locus in its component: one copy of the
    /// fiber of each incident segment end (the fiber just before
    /// collapse), or the sphere around a point of a closed fiber.
    fn classify_link_at(
        &self,
        loci_idx: &[usize],
        adjacency: &[Adjacency],
        point: usize,
        expected_dim: usize,
    ) -> Result<LinkDescription> {
        if !loci_idx.contains(&point) {
            return Err(Error::InvalidInput("point is not a piece of the component".into()));
        }
        let incident: Vec<&Adjacency> = adjacency.iter().filter(|a| a.point == point).collect();
        if incident.is_empty() {
            // Isolated compact fiber: the link of a point of T^d is S^{d−1}.
            let d = self.loci[point].fiber_dim();
            let (pieces, manifold) = if d == 0 {
                (Vec::new(), expected_dim == 0)
            } else {
                (vec![sphere_of_dim(d - 1)], expected_dim == d)
            };
            return Ok(LinkDescription { pieces, expected_dim, manifold, classified: true });
        }
        let own_fiber = self.loci[point].fiber_dim();
        let mut pieces = Vec::new();
        let mut classified = own_fiber == 0;
        for a in &incident {
            match LinkPiece::of_fiber_dim(self.loci[a.segment].fiber_dim()) {
                Some(p) => pieces.push(p),
                None => classified = false,
            }
        }
        pieces.sort_by_key(|p| match p {
            LinkPiece::PointPair => (0, 0),
            LinkPiece::Circle => (1, 0),
            LinkPiece::Sphere(k) => (2, *k),
            LinkPiece::Torus(k) => (3, *k),
        });
        let manifold = classified
            && pieces.len() == 1
            && pieces[0] == sphere_of_dim(expected_dim.saturating_sub(1));
        Ok(LinkDescription { pieces, expected_dim, manifold, classified })
    }

    /// Builds the matched pair of representations at a locus (a point
    /// locus, or a segment locus at the given left parameter) and returns
    /// the Zariski tangent dimension, computed by direct Fox calculus on
    /// the spliced presentation and cross-checked against the
    /// Mayer–Vietoris route. The two must agree exactly.
    pub fn zariski_at(
        &self,
        locus: usize,
        at_left_param: Option<Angle>,
        interface_phi: f64,
    ) -> Result<ZariskiOutcome> {
        let l = &self.loci[locus];
        let (lx, rx) = match (&l.geometry, at_left_param) {
            (LocusGeometry::Point { left_x, right_x, .. }, _) => (*left_x, *right_x),
            (
                LocusGeometry::Segment { left_lo, left_hi, right_at_lo, right_at_hi, .. },
                Some(x),
            ) => {
                let frac = (x - *left_lo).ratio() / (*left_hi - *left_lo).ratio();
                (x, *right_at_lo + (*right_at_hi - *right_at_lo).scale(frac))
            }
            (LocusGeometry::Segment { .. }, None) => {
                return Err(Error::InvalidInput(
                    "segment locus needs an explicit parameter".into(),
                ))
            }
        };
        let (rep_x, rep_y) = self.matched_reps(locus, lx, rx, interface_phi)?;
        self.zariski_of_pair(&rep_x, &rep_y)
    }

    /// The matched pair (ρ_X, ρ_Y) at the given parameters, with the
    /// right side flipped through the involution sheet when the locus
    /// demands it and rotated by the interface gluing parameter.
    pub fn matched_reps(
        &self,
        locus: usize,
        lx: Angle,
        rx: Angle,
        interface_phi: f64,
    ) -> Result<(Vec<GroupElement>, Vec<GroupElement>)> {
        let l = &self.loci[locus];
        let ls = &self.left.strata[l.left_stratum];
        let rs = &self.right.strata[l.right_stratum];
        let rep_x = rep_at(&self.left, ls, lx, &[])?.rep;
        let mut rep_y = rep_at(&self.right, rs, rx, &[])?.rep;
        if l.flipped {
            let j = GroupElement::from_axis_angle([0.0, 1.0, 0.0], std::f64::consts::PI)?;
            rep_y = rep_y.iter().map(|g| g.conjugate_by(&j)).collect();
        }
        if interface_phi != 0.0 {
            let r = GroupElement::from_axis_angle([1.0, 0.0, 0.0], interface_phi)?;
            rep_y = rep_y.iter().map(|g| g.conjugate_by(&r)).collect();
        }
        Ok((rep_x, rep_y))
    }

    fn zariski_of_pair(
        &self,
        rep_x: &[GroupElement],
        rep_y: &[GroupElement],
    ) -> Result<ZariskiOutcome> {
        let assembled: Vec<GroupElement> = rep_x.iter().chain(rep_y.iter()).copied().collect();
        let direct = h1_dim(&self.spliced, &assembled)?;
        let left_report = h1_dim(&self.left.presentation, rep_x)?;
        let right_report = h1_dim(&self.right.presentation, rep_y)?;
        let rank = rank_difference_map(
            &self.left.presentation,
            rep_x,
            &self.right.presentation,
            rep_y,
            &self.h,
        )?;
        let bending = bending_dim(
            &self.left.presentation,
            rep_x,
            &self.right.presentation,
            rep_y,
            &self.h,
        )?;
        let mv = mv_h1(&left_report, &right_report, rank)? + bending;
        if mv != direct.h1 {
            return Err(Error::Internal(format!(
                "Mayer–Vietoris H¹ = {mv} disagrees with the direct Fox computation {} \
                 (h1 left {}, right {}, rank {rank}, bending {bending})",
                direct.h1, left_report.h1, right_report.h1
            )));
        }
        let provisional =
            direct.flagged() || left_report.flagged() || right_report.flagged();
        Ok(ZariskiOutcome {
            dim: direct.h1,
            direct,
            left_report,
            right_report,
            rank_difference: rank,
            bending,
            provisional,
        })
    }

    /// The 0-dimensional locus at a given canonical point with an
    /// irreducible left character and an abelian right character, if any.
    pub fn point_locus_at(&self, p: &PillowPoint) -> Option<usize> {
        self.loci.iter().position(|l| match &l.geometry {
            LocusGeometry::Point { point, .. } => {
                point == p
                    && !self.left.strata[l.left_stratum].is_abelian()
                    && self.right.strata[l.right_stratum].is_abelian()
            }
            _ => false,
        })
    }

    pub fn component_containing(&self, locus: usize) -> Option<&Component> {
        self.components.iter().find(|c| c.loci.contains(&locus))
    }
}

/// Census counts of one splice, keyed for JSON reports.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CensusCounts {
    /// Isolated (0-dimensional) components of the irreducible part,
    /// grouped by Zariski tangent dimension.
    pub isolated_by_zariski: BTreeMap<usize, usize>,
    pub circles: usize,
    pub morse_bott_circles: usize,
    pub spheres: usize,
    pub wedges_of_two_spheres: usize,
    pub tori: usize,
    pub unclassified: usize,
    pub non_manifold_components: usize,
}

/// Full census report of χ of a splice.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CensusReport {
    pub left_piece: String,
    pub right_piece: String,
    pub gluing: GluingMatrix,
    pub counts: CensusCounts,
    pub components: Vec<ComponentSummary>,
    pub provisional: bool,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ComponentSummary {
    pub topology: String,
    pub dim: usize,
    pub morse_bott: bool,
    pub trivial_character: bool,
    pub zariski_samples: Vec<usize>,
    pub representative_points: Vec<PillowPoint>,
    pub piece_count: usize,
    pub links: Vec<LinkSummary>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct LinkSummary {
    pub at: PillowPoint,
    pub pieces: Vec<LinkPiece>,
    pub manifold: bool,
}

impl SpliceAnalysis {
    /// Census over all components: isolated points by Zariski dimension
    /// (the trivial character excluded), circle components with their
    /// Morse–Bott status, and the recognized larger components.
    pub fn census(&self) -> CensusReport {
        let mut counts = CensusCounts {
            isolated_by_zariski: BTreeMap::new(),
            circles: 0,
            morse_bott_circles: 0,
            spheres: 0,
            wedges_of_two_spheres: 0,
            tori: 0,
            unclassified: 0,
            non_manifold_components: 0,
        };
        let mut summaries = Vec::new();
        let mut provisional = false;
        for c in &self.components {
            provisional |= c.provisional;
            if !c.trivial_character {
                match c.topology.as_str() {
                    "point" => {
                        let z = c.zariski_samples.first().copied().unwrap_or(0);
                        *counts.isolated_by_zariski.entry(z).or_default() += 1;
                    }
                    "circle" => {
                        counts.circles += 1;
                        if c.morse_bott {
                            counts.morse_bott_circles += 1;
                        }
                    }
                    "sphere" => counts.spheres += 1,
                    "wedge of two 2-spheres" => counts.wedges_of_two_spheres += 1,
                    t if t.ends_with("-torus") => counts.tori += 1,
                    _ => counts.unclassified += 1,
                }
                if c.links.iter().any(|(_, l)| !l.manifold) {
                    counts.non_manifold_components += 1;
                }
            }
            summaries.push(ComponentSummary {
                topology: c.topology.clone(),
                dim: c.dim,
                morse_bott: c.morse_bott,
                trivial_character: c.trivial_character,
                zariski_samples: c.zariski_samples.clone(),
                representative_points: c
                    .loci
                    .iter()
                    .map(|&i| self.loci[i].representative_point())
                    .collect(),
                piece_count: c.loci.len(),
                links: c
                    .links
                    .iter()
                    .map(|(i, l)| LinkSummary {
                        at: self.loci[*i].representative_point(),
                        pieces: l.pieces.clone(),
                        manifold: l.manifold,
                    })
                    .collect(),
            });
        }
        CensusReport {
            left_piece: crate::arcs::piece_label(&self.left.summands),
            right_piece: crate::arcs::piece_label(&self.right.summands),
            gluing: self.h,
            counts,
            components: summaries,
            provisional,
        }
    }
}
