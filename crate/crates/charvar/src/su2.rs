//! Unit-quaternion model of SU(2): word evaluation, the adjoint action on
//! su(2), and stabilizer classification.
//!
//! A quaternion q = w + x·i + y·j + z·k with |q| = 1 corresponds to the
//! SU(2) matrix with Re(tr) = 2w. The exponential e^{θ·n̂} (n̂ a unit
//! imaginary quaternion) is cos θ + sin θ·n̂, so the element written
//! e^{x·i} in holonomy coordinates has quaternion angle x about the first
//! axis.

use crate::{Error, Result};
use serde::{Deserialize, Serialize};

/// Tolerance for axis-collinearity and centrality tests.
pub const AXIS_TOL: f64 = 1e-9;

/// An element of SU(2), stored as a unit quaternion.
///
/// Products renormalize, so long words stay on the unit sphere to within
/// rounding.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GroupElement {
    pub w: f64,
    pub x: f64,
    pub y: f64,
    pub z: f64,
}

impl GroupElement {
    pub fn identity() -> Self {
        GroupElement { w: 1.0, x: 0.0, y: 0.0, z: 0.0 }
    }

    pub fn minus_identity() -> Self {
        GroupElement { w: -1.0, x: 0.0, y: 0.0, z: 0.0 }
    }

    /// Builds the rotation-like element cos(angle/2) + sin(angle/2)·(axis·(i,j,k)).
    ///
    /// `angle` is the SO(3) rotation angle; the holonomy element e^{x·i}
    /// is `from_axis_angle([1,0,0], 2x)`. Fails if `axis` is not a unit
    /// vector.
    pub fn from_axis_angle(axis: [f64; 3], angle: f64) -> Result<Self> {
        let n2 = axis[0] * axis[0] + axis[1] * axis[1] + axis[2] * axis[2];
        if (n2.sqrt() - 1.0).abs() > AXIS_TOL {
            return Err(Error::InvalidInput(format!(
                "axis must be a unit vector, got |axis| = {}",
                n2.sqrt()
            )));
        }
        let (s, c) = (angle / 2.0).sin_cos();
        Ok(GroupElement { w: c, x: s * axis[0], y: s * axis[1], z: s * axis[2] })
    }

    /// e^{θ·n̂}: quaternion-angle θ about the unit imaginary axis n̂.
    pub fn exp(axis: [f64; 3], theta: f64) -> Result<Self> {
        Self::from_axis_angle(axis, 2.0 * theta)
    }

    pub fn norm(&self) -> f64 {
        (self.w * self.w + self.x * self.x + self.y * self.y + self.z * self.z).sqrt()
    }

    pub fn normalized(&self) -> Self {
        let n = self.norm();
        GroupElement { w: self.w / n, x: self.x / n, y: self.y / n, z: self.z / n }
    }

    /// Quaternion product, renormalized.
    pub fn mul(&self, o: &GroupElement) -> GroupElement {
        let (a0, a1, a2, a3) = (self.w, self.x, self.y, self.z);
        let (b0, b1, b2, b3) = (o.w, o.x, o.y, o.z);
        GroupElement {
            w: a0 * b0 - a1 * b1 - a2 * b2 - a3 * b3,
            x: a0 * b1 + a1 * b0 + a2 * b3 - a3 * b2,
            y: a0 * b2 - a1 * b3 + a2 * b0 + a3 * b1,
            z: a0 * b3 + a1 * b2 - a2 * b1 + a3 * b0,
        }
        .normalized()
    }

    /// Conjugate quaternion; the group inverse on the unit sphere.
    pub fn inverse(&self) -> GroupElement {
        GroupElement { w: self.w, x: -self.x, y: -self.y, z: -self.z }
    }

    /// Integer power by repeated multiplication.
    pub fn pow(&self, e: i64) -> GroupElement {
        let base = if e >= 0 { *self } else { self.inverse() };
        let mut acc = GroupElement::identity();
        for _ in 0..e.unsigned_abs() {
            acc = acc.mul(&base);
        }
        acc
    }

    /// b · self · b⁻¹.
    pub fn conjugate_by(&self, b: &GroupElement) -> GroupElement {
        b.mul(self).mul(&b.inverse())
    }

    /// Re(tr) of the SU(2) matrix: 2w.
    pub fn trace(&self) -> f64 {
        2.0 * self.w
    }

    pub fn imag_norm(&self) -> f64 {
        (self.x * self.x + self.y * self.y + self.z * self.z).sqrt()
    }

    /// True for ±1, the center of SU(2).
    pub fn is_central(&self) -> bool {
        self.imag_norm() < AXIS_TOL
    }

    /// Unit axis of the imaginary part; `None` for central elements.
    pub fn axis(&self) -> Option<[f64; 3]> {
        let n = self.imag_norm();
        if n < AXIS_TOL {
            None
        } else {
            Some([self.x / n, self.y / n, self.z / n])
        }
    }

    /// Holonomy angle θ ∈ [0, π] with self = e^{θ·n̂} for some axis n̂.
    pub fn holonomy_angle(&self) -> f64 {
        self.imag_norm().atan2(self.w)
    }

    /// Signed angle θ ∈ (−π, π] with self = e^{θ·n̂} for the given axis.
    ///
    /// Only meaningful when the imaginary part is parallel to `axis` (or
    /// the element is central).
    pub fn signed_angle_about(&self, axis: [f64; 3]) -> f64 {
        let dot = self.x * axis[0] + self.y * axis[1] + self.z * axis[2];
        dot.atan2(self.w)
    }

    /// Distance to the identity quaternion.
    pub fn dist_to_identity(&self) -> f64 {
        ((self.w - 1.0).powi(2) + self.x * self.x + self.y * self.y + self.z * self.z).sqrt()
    }

    pub fn dist(&self, o: &GroupElement) -> f64 {
        ((self.w - o.w).powi(2)
            + (self.x - o.x).powi(2)
            + (self.y - o.y).powi(2)
            + (self.z - o.z).powi(2))
        .sqrt()
    }
}

/// Stabilizer of a set of SU(2) elements under conjugation.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum StabilizerType {
    /// All elements central; stabilizer is SU(2).
    Full,
    /// A common axis exists and not all elements are central; stabilizer U(1).
    Circle,
    /// No common axis; stabilizer {±1}.
    Center,
}

impl StabilizerType {
    /// Dimension of the Lie algebra of the stabilizer subgroup.
    pub fn lie_dim(&self) -> usize {
        match self {
            StabilizerType::Full => 3,
            StabilizerType::Circle => 1,
            StabilizerType::Center => 0,
        }
    }
}

/// Classifies the conjugation stabilizer of a nonempty set of elements.
pub fn stabilizer_type(elements: &[GroupElement]) -> Result<StabilizerType> {
    if elements.is_empty() {
        return Err(Error::Precondition("stabilizer_type needs a nonempty list".into()));
    }
    let axes: Vec<[f64; 3]> = elements.iter().filter_map(|g| g.axis()).collect();
    if axes.is_empty() {
        return Ok(StabilizerType::Full);
    }
    let a = axes[0];
    for b in &axes[1..] {
        let cross = [
            a[1] * b[2] - a[2] * b[1],
            a[2] * b[0] - a[0] * b[2],
            a[0] * b[1] - a[1] * b[0],
        ];
        let n = (cross[0] * cross[0] + cross[1] * cross[1] + cross[2] * cross[2]).sqrt();
        if n > AXIS_TOL {
            return Ok(StabilizerType::Center);
        }
    }
    Ok(StabilizerType::Circle)
}

/// Evaluates a word in the given assignment of generators.
///
/// A word is a list of (generator index, exponent) letters, multiplied
/// left to right; the empty word is the identity.
pub fn evaluate_word(word: &[(usize, i64)], assignment: &[GroupElement]) -> Result<GroupElement> {
    let mut acc = GroupElement::identity();
    for &(g, e) in word {
        if g >= assignment.len() {
            return Err(Error::InvalidInput(format!(
                "generator index {} out of range (assignment has {})",
                g,
                assignment.len()
            )));
        }
        acc = acc.mul(&assignment[g].pow(e));
    }
    Ok(acc)
}

/// Rotation matrix of the conjugation action on imaginary quaternions.
///
/// Satisfies adjoint_matrix(g·h) = adjoint_matrix(g)·adjoint_matrix(h)
/// and adjoint_matrix(−g) = adjoint_matrix(g).
pub fn adjoint_matrix(g: &GroupElement) -> [[f64; 3]; 3] {
    let (q0, q1, q2, q3) = (g.w, g.x, g.y, g.z);
    [
        [
            1.0 - 2.0 * (q2 * q2 + q3 * q3),
            2.0 * (q1 * q2 - q0 * q3),
            2.0 * (q1 * q3 + q0 * q2),
        ],
        [
            2.0 * (q1 * q2 + q0 * q3),
            1.0 - 2.0 * (q1 * q1 + q3 * q3),
            2.0 * (q2 * q3 - q0 * q1),
        ],
        [
            2.0 * (q1 * q3 - q0 * q2),
            2.0 * (q2 * q3 + q0 * q1),
            1.0 - 2.0 * (q1 * q1 + q2 * q2),
        ],
    ]
}

/// A rotation carrying unit vector `from` to unit vector `to`.
///
/// Used to align a representation's boundary axis with the i-axis.
pub fn rotation_between(from: [f64; 3], to: [f64; 3]) -> GroupElement {
    let dot = from[0] * to[0] + from[1] * to[1] + from[2] * to[2];
    let cross = [
        from[1] * to[2] - from[2] * to[1],
        from[2] * to[0] - from[0] * to[2],
        from[0] * to[1] - from[1] * to[0],
    ];
    let cn = (cross[0] * cross[0] + cross[1] * cross[1] + cross[2] * cross[2]).sqrt();
    if cn < 1e-14 {
        if dot > 0.0 {
            return GroupElement::identity();
        }
        // Antipodal: rotate by π about any axis orthogonal to `from`.
        let ortho = if from[0].abs() < 0.9 { [1.0, 0.0, 0.0] } else { [0.0, 1.0, 0.0] };
        let mut perp = [
            from[1] * ortho[2] - from[2] * ortho[1],
            from[2] * ortho[0] - from[0] * ortho[2],
            from[0] * ortho[1] - from[1] * ortho[0],
        ];
        let pn = (perp[0] * perp[0] + perp[1] * perp[1] + perp[2] * perp[2]).sqrt();
        perp = [perp[0] / pn, perp[1] / pn, perp[2] / pn];
        return GroupElement::from_axis_angle(perp, std::f64::consts::PI).unwrap();
    }
    let angle = cn.atan2(dot);
    let axis = [cross[0] / cn, cross[1] / cn, cross[2] / cn];
    GroupElement::from_axis_angle(axis, angle).unwrap()
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;
    use std::f64::consts::PI;

    pub(crate) fn random_element(rng: &mut ChaCha8Rng) -> GroupElement {
        loop {
            let q = GroupElement {
                w: rng.random_range(-1.0..1.0),
                x: rng.random_range(-1.0..1.0),
                y: rng.random_range(-1.0..1.0),
                z: rng.random_range(-1.0..1.0),
            };
            if q.norm() > 0.1 {
                return q.normalized();
            }
        }
    }

    #[test]
    fn axis_angle_identity_and_full_turn() {
        let id = GroupElement::from_axis_angle([1.0, 0.0, 0.0], 0.0).unwrap();
        assert!(id.dist_to_identity() < 1e-15);
        let full = GroupElement::from_axis_angle([1.0, 0.0, 0.0], 2.0 * PI).unwrap();
        assert!(full.dist(&GroupElement::minus_identity()) < 1e-15);
    }

    #[test]
    fn axis_angle_half_turn_about_j_flips_i_axis() {
        let j = GroupElement::from_axis_angle([0.0, 1.0, 0.0], PI).unwrap();
        assert!(j.dist(&GroupElement { w: 0.0, x: 0.0, y: 1.0, z: 0.0 }) < 1e-15);
        let g = GroupElement::exp([1.0, 0.0, 0.0], 0.7).unwrap();
        let flipped = g.conjugate_by(&j);
        let expect = GroupElement::exp([1.0, 0.0, 0.0], -0.7).unwrap();
        assert!(flipped.dist(&expect) < 1e-12);
    }

    #[test]
    fn non_unit_axis_rejected() {
        assert!(GroupElement::from_axis_angle([1.0, 1.0, 0.0], 1.0).is_err());
    }

    #[test]
    fn word_cancellation_gives_identity() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let u = random_element(&mut rng);
        let g = evaluate_word(&[(0, 1), (0, -1)], &[u]).unwrap();
        assert!(g.dist_to_identity() < 1e-14);
    }

    #[test]
    fn cube_of_third_turn_is_minus_one() {
        let u = GroupElement::from_axis_angle([1.0, 0.0, 0.0], 2.0 * PI / 3.0).unwrap();
        let g = evaluate_word(&[(0, 3)], &[u]).unwrap();
        assert!(g.dist(&GroupElement::minus_identity()) < 1e-14);
    }

    #[test]
    fn torus_knot_relator_holds_on_irreducible_assignment() {
        // u of quaternion-angle π/3 and v of angle π/5 about a tilted axis
        // satisfy u³ = v⁵ = −1, hence the T(3,5) relator u³v⁻⁵.
        let u = GroupElement::exp([1.0, 0.0, 0.0], PI / 3.0).unwrap();
        let t: f64 = 0.9;
        let v = GroupElement::exp([t.cos(), t.sin(), 0.0], PI / 5.0).unwrap();
        let g = evaluate_word(&[(0, 3), (1, -5)], &[u, v]).unwrap();
        assert!(g.dist_to_identity() < 1e-9);
        assert_eq!(stabilizer_type(&[u, v]).unwrap(), StabilizerType::Center);
    }

    #[test]
    fn word_index_out_of_range() {
        let u = GroupElement::identity();
        assert!(evaluate_word(&[(1, 1)], &[u]).is_err());
    }

    #[test]
    fn stabilizer_classification_cases() {
        let id = GroupElement::identity();
        let m = GroupElement::minus_identity();
        assert_eq!(stabilizer_type(&[id, m]).unwrap(), StabilizerType::Full);

        let a = GroupElement::exp([1.0, 0.0, 0.0], PI / 14.0).unwrap();
        let b = GroupElement::exp([1.0, 0.0, 0.0], 0.3).unwrap();
        assert_eq!(stabilizer_type(&[a, b]).unwrap(), StabilizerType::Circle);

        let t: f64 = 0.7;
        let c = GroupElement::exp([1.0, 0.0, 0.0], PI / 3.0).unwrap();
        let d = GroupElement::exp([t.cos(), t.sin(), 0.0], PI / 5.0).unwrap();
        assert_eq!(stabilizer_type(&[c, d]).unwrap(), StabilizerType::Center);
    }

    #[test]
    fn stabilizer_lie_dims() {
        assert_eq!(StabilizerType::Full.lie_dim(), 3);
        assert_eq!(StabilizerType::Circle.lie_dim(), 1);
        assert_eq!(StabilizerType::Center.lie_dim(), 0);
    }

    #[test]
    #[allow(clippy::needless_range_loop)]
    fn adjoint_examples() {
        let id = adjoint_matrix(&GroupElement::identity());
        for i in 0..3 {
            for j in 0..3 {
                let e = if i == j { 1.0 } else { 0.0 };
                assert!((id[i][j] - e).abs() < 1e-15);
            }
        }
        // Angle-π about i: diag(1, −1, −1).
        let g = GroupElement { w: 0.0, x: 1.0, y: 0.0, z: 0.0 };
        let m = adjoint_matrix(&g);
        let want = [[1.0, 0.0, 0.0], [0.0, -1.0, 0.0], [0.0, 0.0, -1.0]];
        for i in 0..3 {
            for j in 0..3 {
                assert!((m[i][j] - want[i][j]).abs() < 1e-15);
            }
        }
        // e^{(π/4)i} rotates by π/2 about the first axis.
        let g = GroupElement::exp([1.0, 0.0, 0.0], PI / 4.0).unwrap();
        let m = adjoint_matrix(&g);
        let want = [[1.0, 0.0, 0.0], [0.0, 0.0, -1.0], [0.0, 1.0, 0.0]];
        for i in 0..3 {
            for j in 0..3 {
                assert!((m[i][j] - want[i][j]).abs() < 1e-12, "({i},{j})");
            }
        }
    }

    #[allow(clippy::needless_range_loop)]
    fn mat_mul(a: &[[f64; 3]; 3], b: &[[f64; 3]; 3]) -> [[f64; 3]; 3] {
        let mut c = [[0.0; 3]; 3];
        for i in 0..3 {
            for j in 0..3 {
                for (k, bk) in b.iter().enumerate() {
                    c[i][j] += a[i][k] * bk[j];
                }
            }
        }
        c
    }

    #[test]
    fn adjoint_is_a_homomorphism() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..1000 {
            let g = random_element(&mut rng);
            let h = random_element(&mut rng);
            let lhs = adjoint_matrix(&g.mul(&h));
            let rhs = mat_mul(&adjoint_matrix(&g), &adjoint_matrix(&h));
            for i in 0..3 {
                for j in 0..3 {
                    assert!((lhs[i][j] - rhs[i][j]).abs() < 1e-9);
                }
            }
        }
    }

    #[test]
    fn adjoint_kills_sign() {
        let mut rng = ChaCha8Rng::seed_from_u64(13);
        let g = random_element(&mut rng);
        let neg = GroupElement { w: -g.w, x: -g.x, y: -g.y, z: -g.z };
        let (a, b) = (adjoint_matrix(&g), adjoint_matrix(&neg));
        for i in 0..3 {
            for j in 0..3 {
                assert!((a[i][j] - b[i][j]).abs() < 1e-15);
            }
        }
    }

    #[test]
    fn stabilizer_invariant_under_simultaneous_conjugation() {
        let mut rng = ChaCha8Rng::seed_from_u64(17);
        let samples: Vec<Vec<GroupElement>> = vec![
            vec![GroupElement::identity(), GroupElement::minus_identity()],
            vec![
                GroupElement::exp([1.0, 0.0, 0.0], 0.4).unwrap(),
                GroupElement::exp([1.0, 0.0, 0.0], 1.1).unwrap(),
            ],
            vec![
                GroupElement::exp([1.0, 0.0, 0.0], 0.4).unwrap(),
                GroupElement::exp([0.0, 1.0, 0.0], 1.1).unwrap(),
            ],
        ];
        for list in samples {
            let before = stabilizer_type(&list).unwrap();
            for _ in 0..100 {
                let c = random_element(&mut rng);
                let conj: Vec<_> = list.iter().map(|g| g.conjugate_by(&c)).collect();
                assert_eq!(stabilizer_type(&conj).unwrap(), before);
            }
        }
    }

    #[test]
    fn free_reduction_leaves_words_unchanged() {
        let mut rng = ChaCha8Rng::seed_from_u64(19);
        for _ in 0..200 {
            let gens: Vec<GroupElement> = (0..3).map(|_| random_element(&mut rng)).collect();
            let word: Vec<(usize, i64)> = (0..6)
                .map(|_| (rng.random_range(0..3usize), rng.random_range(1..4i64) * if rng.random_bool(0.5) { 1 } else { -1 }))
                .collect();
            let plain = evaluate_word(&word, &gens).unwrap();
            // Insert g·g⁻¹ at a random position.
            let pos = rng.random_range(0..=word.len());
            let g = rng.random_range(0..3usize);
            let mut padded = word.clone();
            padded.insert(pos, (g, -1));
            padded.insert(pos, (g, 1));
            let stuffed = evaluate_word(&padded, &gens).unwrap();
            assert!(plain.dist(&stuffed) < 1e-12);
        }
    }

    #[test]
    fn rotation_between_aligns_vectors() {
        let mut rng = ChaCha8Rng::seed_from_u64(23);
        for _ in 0..200 {
            let g = random_element(&mut rng);
            let Some(from) = g.axis() else { continue };
            let to = [1.0, 0.0, 0.0];
            let r = rotation_between(from, to);
            let aligned = g.conjugate_by(&r);
            let ax = aligned.axis().unwrap();
            assert!((ax[0] - 1.0).abs() < 1e-10 && ax[1].abs() < 1e-10 && ax[2].abs() < 1e-10);
        }
    }
}
