//! Finitely presented groups for knot exteriors, connected sums and
//! splices, with Fox derivatives and integral first homology.

use crate::su2::{adjoint_matrix, evaluate_word, GroupElement};
use crate::{Error, Result};
use nalgebra::{DMatrix, Matrix3};
use num_integer::Integer;
use serde::{Deserialize, Serialize};

/// A freely reduced word in abstract generators.
///
/// Letters are (generator index, nonzero exponent); adjacent letters have
/// distinct generator indices.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Word {
    letters: Vec<(usize, i64)>,
}

impl Word {
    pub fn identity() -> Self {
        Word { letters: Vec::new() }
    }

    /// Builds a word, merging adjacent letters with equal generator and
    /// dropping zero exponents.
    pub fn new(letters: impl IntoIterator<Item = (usize, i64)>) -> Self {
        let mut reduced: Vec<(usize, i64)> = Vec::new();
        for (g, e) in letters {
            if e == 0 {
                continue;
            }
            match reduced.last_mut() {
                Some((lg, le)) if *lg == g => {
                    *le += e;
                    if *le == 0 {
                        reduced.pop();
                        // Merging may expose a new cancellation; restart the
                        // tail merge by re-pushing nothing (loop continues).
                    }
                }
                _ => reduced.push((g, e)),
            }
        }
        // A pop above can leave two mergeable neighbors; normalize fully.
        let mut out: Vec<(usize, i64)> = Vec::new();
        for (g, e) in reduced {
            match out.last_mut() {
                Some((lg, le)) if *lg == g => {
                    *le += e;
                    if *le == 0 {
                        out.pop();
                    }
                }
                _ => out.push((g, e)),
            }
        }
        Word { letters: out }
    }

    pub fn generator(g: usize) -> Self {
        Word { letters: vec![(g, 1)] }
    }

    pub fn letters(&self) -> &[(usize, i64)] {
        &self.letters
    }

    pub fn is_identity(&self) -> bool {
        self.letters.is_empty()
    }

    pub fn mul(&self, other: &Word) -> Word {
        Word::new(self.letters.iter().chain(other.letters.iter()).copied())
    }

    pub fn inverse(&self) -> Word {
        Word { letters: self.letters.iter().rev().map(|&(g, e)| (g, -e)).collect() }
    }

    pub fn pow(&self, e: i64) -> Word {
        let base = if e >= 0 { self.clone() } else { self.inverse() };
        let mut acc = Word::identity();
        for _ in 0..e.unsigned_abs() {
            acc = acc.mul(&base);
        }
        acc
    }

    /// Reindexes generators by `offset` (for disjoint unions).
    pub fn shifted(&self, offset: usize) -> Word {
        Word { letters: self.letters.iter().map(|&(g, e)| (g + offset, e)).collect() }
    }

    /// Exponent sum per generator, as a row of the abelianized relation matrix.
    pub fn exponent_sums(&self, num_generators: usize) -> Vec<i64> {
        let mut row = vec![0i64; num_generators];
        for &(g, e) in &self.letters {
            row[g] += e;
        }
        row
    }

    pub fn evaluate(&self, assignment: &[GroupElement]) -> Result<GroupElement> {
        evaluate_word(&self.letters, assignment)
    }
}

/// Distinguished peripheral words of a knot-exterior presentation.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Peripheral {
    pub meridian: Word,
    pub longitude: Word,
}

/// A finite presentation with optional peripheral structure.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Presentation {
    pub num_generators: usize,
    pub relators: Vec<Word>,
    pub peripheral: Option<Peripheral>,
    pub label: String,
}

/// An integer 2×2 matrix with determinant ±1, acting on (meridian,
/// longitude) coordinates of a boundary torus. Rows are (a, b) and (c, d):
/// μ ↦ μ^a λ^b and λ ↦ μ^c λ^d.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct GluingMatrix {
    pub a: i64,
    pub b: i64,
    pub c: i64,
    pub d: i64,
}

impl GluingMatrix {
    pub fn new(a: i64, b: i64, c: i64, d: i64) -> Result<Self> {
        let m = GluingMatrix { a, b, c, d };
        if m.det().abs() != 1 {
            return Err(Error::InvalidInput(format!(
                "gluing matrix must have determinant ±1, got {}",
                m.det()
            )));
        }
        Ok(m)
    }

    pub fn det(&self) -> i64 {
        self.a * self.d - self.b * self.c
    }

    pub fn identity() -> Self {
        GluingMatrix { a: 1, b: 0, c: 0, d: 1 }
    }

    pub fn inverse(&self) -> Self {
        let s = self.det(); // ±1, so the adjugate divided by det is exact
        GluingMatrix { a: self.d * s, b: -self.b * s, c: -self.c * s, d: self.a * s }
    }

    pub fn mul(&self, o: &GluingMatrix) -> Self {
        GluingMatrix {
            a: self.a * o.a + self.b * o.c,
            b: self.a * o.b + self.b * o.d,
            c: self.c * o.a + self.d * o.c,
            d: self.c * o.b + self.d * o.d,
        }
    }

    /// The boundary identification used throughout this library:
    /// μ ↦ μ, λ ↦ μ⁻¹λ⁻¹. It is an exact involution.
    pub fn standard() -> Self {
        GluingMatrix { a: 1, b: 0, c: -1, d: -1 }
    }
}

impl Presentation {
    /// The unknot exterior: one generator, no relators, λ trivial.
    pub fn unknot() -> Presentation {
        Presentation {
            num_generators: 1,
            relators: Vec::new(),
            peripheral: Some(Peripheral {
                meridian: Word::generator(0),
                longitude: Word::identity(),
            }),
            label: "unknot".into(),
        }
    }

    /// Exterior group of the (p, q) torus knot: ⟨u, v | uᵖ = v^q⟩ with
    /// meridian u^m v^n (mq + np = 1, |m| minimal, ties to m > 0) and
    /// longitude uᵖ μ^{−pq}.
    pub fn torus_knot(p: i64, q: i64) -> Result<Presentation> {
        if p.gcd(&q) != 1 {
            return Err(Error::InvalidInput(format!("p = {p} and q = {q} are not coprime")));
        }
        if p.abs() < 2 || q.abs() < 2 {
            return Err(Error::InvalidInput(format!(
                "|p| and |q| must both be at least 2, got ({p}, {q})"
            )));
        }
        let (m, n) = meridian_exponents(p, q)?;
        let u = Word::generator(0);
        let v = Word::generator(1);
        let relator = u.pow(p).mul(&v.pow(-q));
        let meridian = u.pow(m).mul(&v.pow(n));
        let longitude = u.pow(p).mul(&meridian.pow(-(p * q)));
        let pres = Presentation {
            num_generators: 2,
            relators: vec![relator],
            peripheral: Some(Peripheral { meridian, longitude }),
            label: format!("T({p},{q})"),
        };
        pres.check_knot_exterior()?;
        Ok(pres)
    }

    /// Connected sum: disjoint generators, relators of both sides plus the
    /// meridian identification μ₁μ₂⁻¹; meridian μ₁ and longitude λ₁λ₂.
    pub fn connected_sum(&self, other: &Presentation) -> Result<Presentation> {
        let p1 = self.peripheral.as_ref().ok_or_else(|| {
            Error::InvalidInput(format!("{} has no peripheral data", self.label))
        })?;
        let p2 = other.peripheral.as_ref().ok_or_else(|| {
            Error::InvalidInput(format!("{} has no peripheral data", other.label))
        })?;
        let off = self.num_generators;
        let mut relators = self.relators.clone();
        relators.extend(other.relators.iter().map(|r| r.shifted(off)));
        relators.push(p1.meridian.mul(&p2.meridian.shifted(off).inverse()));
        let pres = Presentation {
            num_generators: self.num_generators + other.num_generators,
            relators,
            peripheral: Some(Peripheral {
                meridian: p1.meridian.clone(),
                longitude: p1.longitude.mul(&p2.longitude.shifted(off)),
            }),
            label: format!("{}#{}", self.label, other.label),
        };
        pres.check_knot_exterior()?;
        Ok(pres)
    }

    /// Iterated connected sum of torus knots, left to right.
    pub fn composite_torus_knot(summands: &[(i64, i64)]) -> Result<Presentation> {
        if summands.is_empty() {
            return Err(Error::InvalidInput("empty connected sum".into()));
        }
        let mut pres = Presentation::torus_knot(summands[0].0, summands[0].1)?;
        for &(p, q) in &summands[1..] {
            pres = pres.connected_sum(&Presentation::torus_knot(p, q)?)?;
        }
        Ok(pres)
    }

    /// Splice of two knot exteriors along their boundary tori.
    ///
    /// Adds the gluing relators μ_X (μ_Y^a λ_Y^b)⁻¹ and λ_X (μ_Y^c λ_Y^d)⁻¹.
    pub fn splice(&self, other: &Presentation, h: &GluingMatrix) -> Result<Presentation> {
        if h.det().abs() != 1 {
            return Err(Error::InvalidInput("gluing matrix must have determinant ±1".into()));
        }
        let px = self.peripheral.as_ref().ok_or_else(|| {
            Error::InvalidInput(format!("{} has no peripheral data", self.label))
        })?;
        let py = other.peripheral.as_ref().ok_or_else(|| {
            Error::InvalidInput(format!("{} has no peripheral data", other.label))
        })?;
        let off = self.num_generators;
        let muy = py.meridian.shifted(off);
        let lay = py.longitude.shifted(off);
        let mut relators = self.relators.clone();
        relators.extend(other.relators.iter().map(|r| r.shifted(off)));
        relators.push(px.meridian.mul(&muy.pow(h.a).mul(&lay.pow(h.b)).inverse()));
        relators.push(px.longitude.mul(&muy.pow(h.c).mul(&lay.pow(h.d)).inverse()));
        Ok(Presentation {
            num_generators: self.num_generators + other.num_generators,
            relators,
            peripheral: None,
            label: format!("{} u_h {}", self.label, other.label),
        })
    }

    /// Presentation of π₁(T²) = ⟨μ, λ | [μ, λ]⟩ with peripheral (μ, λ).
    pub fn torus() -> Presentation {
        let mu = Word::generator(0);
        let la = Word::generator(1);
        let comm = mu.mul(&la).mul(&mu.inverse()).mul(&la.inverse());
        Presentation {
            num_generators: 2,
            relators: vec![comm],
            peripheral: Some(Peripheral { meridian: mu, longitude: la }),
            label: "T^2".into(),
        }
    }

    /// Relator exponent-sum matrix (relators × generators).
    pub fn relation_matrix(&self) -> Vec<Vec<i64>> {
        self.relators.iter().map(|r| r.exponent_sums(self.num_generators)).collect()
    }

    /// Invariant factors of H₁: nontrivial torsion factors followed by one
    /// zero per free rank; the empty list is the trivial group.
    pub fn first_homology(&self) -> Vec<i64> {
        let rows = self.relation_matrix();
        let mat: Vec<Vec<i128>> =
            rows.iter().map(|r| r.iter().map(|&x| x as i128).collect()).collect();
        let diag = snf::smith_diagonal(mat, self.num_generators);
        let rank = diag.iter().filter(|&&d| d != 0).count();
        let mut out: Vec<i64> = diag
            .iter()
            .filter(|&&d| d != 0 && d.abs() != 1)
            .map(|&d| d.unsigned_abs() as i64)
            .collect();
        out.extend(std::iter::repeat_n(0, self.num_generators - rank));
        out
    }

    /// The homomorphism π₁ → Z = H₁ normalized so the meridian maps to 1,
    /// as exponents per generator. Fails unless H₁ ≅ Z with μ a generator.
    pub fn abelianization_exponents(&self) -> Result<Vec<i64>> {
        let per = self
            .peripheral
            .as_ref()
            .ok_or_else(|| Error::Precondition("no peripheral data".into()))?;
        let g = self.num_generators;
        // Transpose of the relation matrix: H₁ = coker(Aᵀ : Z^r → Z^g).
        let rows = self.relation_matrix();
        let mut at = vec![vec![0i128; rows.len()]; g];
        for (i, row) in rows.iter().enumerate() {
            for (j, &x) in row.iter().enumerate() {
                at[j][i] = x as i128;
            }
        }
        let (diag, left) = snf::smith_with_left(at, rows.len().max(1), g);
        let rank = diag.iter().filter(|&&d| d != 0).count();
        if g - rank != 1 || diag.iter().any(|&d| d != 0 && d.abs() != 1) {
            return Err(Error::Precondition(format!(
                "{}: H1 is not infinite cyclic",
                self.label
            )));
        }
        // Rows of the left transform beyond the rank give the free coordinate.
        let free_row: Vec<i64> = left[rank].iter().map(|&x| x as i64).collect();
        let mu_vec = per.meridian.exponent_sums(g);
        let image: i64 = free_row.iter().zip(&mu_vec).map(|(a, b)| a * b).sum();
        if image.abs() != 1 {
            return Err(Error::Precondition(format!(
                "{}: meridian does not generate H1 (maps to {image})",
                self.label
            )));
        }
        Ok(free_row.iter().map(|&x| x * image).collect())
    }

    /// Knot-exterior invariant: H₁ infinite cyclic generated by the
    /// meridian, with the longitude trivial in H₁.
    fn check_knot_exterior(&self) -> Result<()> {
        let phi = self.abelianization_exponents()?;
        let per = self.peripheral.as_ref().unwrap();
        let lambda = per.longitude.exponent_sums(self.num_generators);
        let image: i64 = phi.iter().zip(&lambda).map(|(a, b)| a * b).sum();
        if image != 0 {
            return Err(Error::Precondition(format!(
                "{}: longitude is nontrivial in H1 (maps to {image})",
                self.label
            )));
        }
        Ok(())
    }

    /// Fox Jacobian of the presentation at a representation, a
    /// 3·#relators × 3·#generators real matrix built from the adjoint
    /// action. Requires every relator to evaluate to the identity within
    /// 1e−8 (on the nose in SU(2), not merely up to sign).
    pub fn fox_jacobian(&self, rep: &[GroupElement]) -> Result<DMatrix<f64>> {
        if rep.len() != self.num_generators {
            return Err(Error::InvalidInput(format!(
                "representation assigns {} generators, presentation has {}",
                rep.len(),
                self.num_generators
            )));
        }
        let mut max_dev: f64 = 0.0;
        for r in &self.relators {
            let val = r.evaluate(rep)?;
            max_dev = max_dev.max(val.dist_to_identity());
        }
        if max_dev > 1e-8 {
            return Err(Error::Precondition(format!(
                "representation does not satisfy the relators of {}: max deviation {max_dev:.3e}",
                self.label
            )));
        }
        let (nr, ng) = (self.relators.len(), self.num_generators);
        let mut jac = DMatrix::<f64>::zeros(3 * nr, 3 * ng);
        for (ri, r) in self.relators.iter().enumerate() {
            let blocks = fox_derivative_blocks(r, rep, ng);
            for (gi, block) in blocks.iter().enumerate() {
                for i in 0..3 {
                    for j in 0..3 {
                        jac[(3 * ri + i, 3 * gi + j)] = block[(i, j)];
                    }
                }
            }
        }
        Ok(jac)
    }
}

/// Fox derivatives ∂w/∂g of one word, evaluated through Ad ∘ ρ.
///
/// Rules: ∂(uv)/∂g = ∂u/∂g + Ad(ρ(u))·∂v/∂g and
/// ∂(u⁻¹)/∂g = −Ad(ρ(u⁻¹))·∂u/∂g.
fn fox_derivative_blocks(w: &Word, rep: &[GroupElement], ng: usize) -> Vec<Matrix3<f64>> {
    let mut blocks = vec![Matrix3::<f64>::zeros(); ng];
    let mut prefix = Matrix3::<f64>::identity();
    for &(g, e) in w.letters() {
        let ad = Matrix3::from_fn(|i, j| adjoint_matrix(&rep[g])[i][j]);
        if e >= 0 {
            for _ in 0..e {
                blocks[g] += prefix;
                prefix *= ad;
            }
        } else {
            let ad_inv = ad.transpose(); // adjoint matrices are orthogonal
            for _ in 0..(-e) {
                prefix *= ad_inv;
                blocks[g] -= prefix;
            }
        }
    }
    blocks
}

/// Meridian exponents (m, n) with mq + np = 1, |m| minimal (ties broken
/// toward m > 0).
fn meridian_exponents(p: i64, q: i64) -> Result<(i64, i64)> {
    let e = i64::extended_gcd(&q, &p);
    if e.gcd != 1 {
        return Err(Error::InvalidInput(format!("gcd({p}, {q}) = {} != 1", e.gcd)));
    }
    // General solution: m = m0 + t·p, n = n0 − t·q.
    let (m0, n0) = (e.x, e.y);
    let center = -((m0 as f64) / (p as f64)).round() as i64;
    let mut best = (m0, n0);
    for t in (center - 2)..=(center + 2) {
        let m = m0 + t * p;
        let n = n0 - t * q;
        if m.abs() < best.0.abs() || (m.abs() == best.0.abs() && m > best.0) {
            best = (m, n);
        }
    }
    debug_assert_eq!(best.0 * q + best.1 * p, 1);
    Ok(best)
}

pub mod snf {
    //! Smith normal form over the integers, sized for the small relation
    //! matrices arising from knot presentations.
    #![allow(clippy::needless_range_loop)] // index form mirrors the matrix algebra

    fn find_pivot(m: &[Vec<i128>], k: usize) -> Option<(usize, usize)> {
        let mut best: Option<(usize, usize, i128)> = None;
        for i in k..m.len() {
            for j in k..m[i].len() {
                let v = m[i][j].abs();
                if v != 0 && best.is_none_or(|(_, _, b)| v < b) {
                    best = Some((i, j, v));
                }
            }
        }
        best.map(|(i, j, _)| (i, j))
    }

    /// Reduces `m` in place to Smith normal form; `left`, when present,
    /// accumulates the row transform.
    fn reduce(m: &mut [Vec<i128>], mut left: Option<&mut Vec<Vec<i128>>>) {
        let nr = m.len();
        if nr == 0 {
            return;
        }
        let nc = m[0].len();
        let steps = nr.min(nc);
        for k in 0..steps {
            loop {
                let Some((pi, pj)) = find_pivot(m, k) else { return };
                m.swap(k, pi);
                if let Some(l) = left.as_deref_mut() {
                    l.swap(k, pi);
                }
                for row in m.iter_mut() {
                    row.swap(k, pj);
                }
                let piv = m[k][k];
                let mut clean = true;
                for i in (k + 1)..nr {
                    let f = m[i][k].div_euclid(piv);
                    if f != 0 {
                        for j in 0..nc {
                            m[i][j] -= f * m[k][j];
                        }
                        if let Some(l) = left.as_deref_mut() {
                            for j in 0..l[i].len() {
                                l[i][j] -= f * l[k][j];
                            }
                        }
                    }
                    if m[i][k] != 0 {
                        clean = false;
                    }
                }
                for j in (k + 1)..nc {
                    let f = m[k][j].div_euclid(piv);
                    if f != 0 {
                        for row in m.iter_mut() {
                            row[j] -= f * row[k];
                        }
                    }
                    if m[k][j] != 0 {
                        clean = false;
                    }
                }
                if !clean {
                    continue;
                }
                // Divisibility: fold any off-corner entry not divisible by
                // the pivot into column k and retry.
                let mut fixed = true;
                'scan: for i in (k + 1)..nr {
                    for j in (k + 1)..nc {
                        if m[i][j] % piv != 0 {
                            for jj in 0..nc {
                                let add = m[i][jj];
                                m[k][jj] += add;
                            }
                            if let Some(l) = left.as_deref_mut() {
                                for jj in 0..l[k].len() {
                                    l[k][jj] += l[i][jj];
                                }
                            }
                            fixed = false;
                            break 'scan;
                        }
                    }
                }
                if fixed {
                    break;
                }
            }
            if m[k][k] < 0 {
                for j in 0..nc {
                    m[k][j] = -m[k][j];
                }
                if let Some(l) = left.as_deref_mut() {
                    for j in 0..l[k].len() {
                        l[k][j] = -l[k][j];
                    }
                }
            }
        }
    }

    /// Diagonal of the Smith normal form of an r×c matrix given as rows
    /// (ragged input is padded with zero rows).
    pub fn smith_diagonal(mut m: Vec<Vec<i128>>, cols: usize) -> Vec<i128> {
        for row in &mut m {
            row.resize(cols, 0);
        }
        if m.is_empty() {
            m.push(vec![0; cols]);
        }
        reduce(&mut m, None);
        (0..m.len().min(cols)).map(|k| m[k][k]).collect()
    }

    /// Smith normal form with the left (row) transform: returns (diag, L)
    /// where L·M·R = D for some unimodular R that is not returned.
    pub fn smith_with_left(
        mut m: Vec<Vec<i128>>,
        cols: usize,
        rows: usize,
    ) -> (Vec<i128>, Vec<Vec<i128>>) {
        m.resize(rows, vec![0; cols]);
        for row in &mut m {
            row.resize(cols.max(1), 0);
        }
        let mut left: Vec<Vec<i128>> =
            (0..rows).map(|i| (0..rows).map(|j| i128::from(i == j)).collect()).collect();
        reduce(&mut m, Some(&mut left));
        let diag = (0..rows.min(cols.max(1))).map(|k| m[k][k]).collect();
        (diag, left)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;
    use std::f64::consts::PI;

    #[test]
    fn word_reduction() {
        let w = Word::new([(0, 2), (0, -2), (1, 3)]);
        assert_eq!(w.letters(), &[(1, 3)]);
        let w = Word::new([(0, 1), (1, 1), (1, -1), (0, -1)]);
        assert!(w.is_identity());
        let w = Word::new([(0, 1), (1, 2)]).mul(&Word::new([(1, -2), (0, 1)]));
        assert_eq!(w.letters(), &[(0, 2)]);
    }

    #[test]
    fn torus_knot_2_3() {
        let k = Presentation::torus_knot(2, 3).unwrap();
        assert_eq!(k.relators.len(), 1);
        assert_eq!(k.relators[0].letters(), &[(0, 2), (1, -3)]);
        let per = k.peripheral.as_ref().unwrap();
        assert_eq!(per.meridian.letters(), &[(0, 1), (1, -1)]);
        // λ = u² μ⁻⁶.
        let mu = per.meridian.clone();
        let expect = Word::new([(0, 2)]).mul(&mu.pow(-6));
        assert_eq!(per.longitude, expect);
        assert_eq!(k.first_homology(), vec![0]);
    }

    #[test]
    fn torus_knot_3_5() {
        let k = Presentation::torus_knot(3, 5).unwrap();
        let per = k.peripheral.as_ref().unwrap();
        // 5m + 3n = 1 with minimal |m|: m = −1, n = 2.
        assert_eq!(per.meridian.letters(), &[(0, -1), (1, 2)]);
        let expect = Word::new([(0, 3)]).mul(&per.meridian.pow(-15));
        assert_eq!(per.longitude, expect);
    }

    #[test]
    fn torus_knot_negative_p() {
        let k = Presentation::torus_knot(-2, 7).unwrap();
        assert_eq!(k.relators[0].letters(), &[(0, -2), (1, -7)]);
        let per = k.peripheral.as_ref().unwrap();
        let expect = Word::new([(0, -2)]).mul(&per.meridian.pow(14));
        assert_eq!(per.longitude, expect);
        // Longitude abelianizes to zero (checked at construction too).
        let phi = k.abelianization_exponents().unwrap();
        let lam = per.longitude.exponent_sums(2);
        assert_eq!(phi.iter().zip(&lam).map(|(a, b)| a * b).sum::<i64>(), 0);
    }

    #[test]
    fn coprimality_required() {
        assert!(Presentation::torus_knot(2, 4).is_err());
        assert!(Presentation::torus_knot(3, 3).is_err());
    }

    #[test]
    fn connected_sum_shapes() {
        let k = Presentation::torus_knot(-2, 7).unwrap();
        let z = k.connected_sum(&k).unwrap();
        assert_eq!(z.num_generators, 4);
        assert_eq!(z.relators.len(), 3);
        assert_eq!(z.first_homology(), vec![0]);
        let per = z.peripheral.as_ref().unwrap();
        let (l1, l2) = {
            let p = k.peripheral.as_ref().unwrap();
            (p.longitude.clone(), p.longitude.shifted(2))
        };
        assert_eq!(per.longitude, l1.mul(&l2));

        let with_unknot = k.connected_sum(&Presentation::unknot()).unwrap();
        assert_eq!(with_unknot.first_homology(), vec![0]);
        assert_eq!(with_unknot.peripheral.as_ref().unwrap().longitude, l1);

        let big = Presentation::composite_torus_knot(&[(-2, 7), (-2, 7), (-2, 7), (2, 7)])
            .unwrap();
        assert_eq!(big.num_generators, 8);
        assert_eq!(big.first_homology(), vec![0]);
    }

    #[test]
    fn splice_homology_spheres() {
        let h = GluingMatrix::standard();
        let x = Presentation::torus_knot(3, 5).unwrap();
        let y = Presentation::torus_knot(2, 7).unwrap();
        let s1 = x.splice(&y, &h).unwrap();
        assert!(s1.first_homology().is_empty());

        let z = Presentation::composite_torus_knot(&[(-2, 7), (-2, 7)]).unwrap();
        let s2 = x.splice(&z, &h).unwrap();
        assert!(s2.first_homology().is_empty());
    }

    #[test]
    fn splice_with_unknot_fills_meridian() {
        let h = GluingMatrix::new(0, 1, 1, 0).unwrap();
        let x = Presentation::torus_knot(3, 5).unwrap();
        let s = x.splice(&Presentation::unknot(), &h).unwrap();
        assert!(s.first_homology().is_empty());
    }

    #[test]
    fn gluing_matrix_validation_and_involution() {
        assert!(GluingMatrix::new(2, 0, 0, 1).is_err());
        let h = GluingMatrix::standard();
        assert_eq!(h.mul(&h), GluingMatrix::identity());
        assert_eq!(h.inverse(), h);
    }

    #[test]
    fn smith_normal_form_small_cases() {
        let d = snf::smith_diagonal(vec![vec![2, 4], vec![6, 8]], 2);
        // det = −8, d1·d2 = 8 with d1 | d2 and gcd of entries 2.
        assert_eq!(d, vec![2, 4]);
        let d = snf::smith_diagonal(vec![vec![1, 0], vec![0, 0]], 2);
        assert_eq!(d, vec![1, 0]);
        let d = snf::smith_diagonal(vec![vec![3, 0], vec![0, 5]], 2);
        assert_eq!(d[0] * d[1], 15);
        assert_eq!(d[1] % d[0], 0);
    }

    #[test]
    fn smith_left_transform_tracks_quotient() {
        // Z² / <(2, 0)> = Z/2 ⊕ Z: free coordinate is the second.
        let (diag, left) = snf::smith_with_left(vec![vec![2], vec![0]], 1, 2);
        assert_eq!(diag, vec![2]);
        // left row 1 composed with the quotient must kill (2,0).
        assert_eq!(left[1][0] * 2, 0);
    }

    #[test]
    fn abelianization_exponents_of_torus_knots() {
        for (p, q) in [(2i64, 3i64), (3, 5), (2, 7), (-2, 7), (3, -5)] {
            let k = Presentation::torus_knot(p, q).unwrap();
            let phi = k.abelianization_exponents().unwrap();
            // u ↦ ±q, v ↦ ±p with μ ↦ 1.
            let per = k.peripheral.as_ref().unwrap();
            let mu = per.meridian.exponent_sums(2);
            assert_eq!(phi[0] * mu[0] + phi[1] * mu[1], 1);
            assert_eq!(phi[0] * p - phi[1] * q, 0);
        }
    }

    #[test]
    fn fox_jacobian_at_trivial_rep_is_exponent_sums() {
        let k = Presentation::torus_knot(2, 3).unwrap();
        let rep = vec![GroupElement::identity(); 2];
        let j = k.fox_jacobian(&rep).unwrap();
        // Blocks 2·I and −3·I.
        for i in 0..3 {
            for jj in 0..3 {
                let want_u = if i == jj { 2.0 } else { 0.0 };
                let want_v = if i == jj { -3.0 } else { 0.0 };
                assert!((j[(i, jj)] - want_u).abs() < 1e-14);
                assert!((j[(i, 3 + jj)] - want_v).abs() < 1e-14);
            }
        }
        assert_eq!(j.rank(1e-9), 3);
    }

    #[test]
    fn fox_jacobian_rejects_non_representations() {
        let k = Presentation::torus_knot(2, 3).unwrap();
        let rep = vec![
            GroupElement::exp([1.0, 0.0, 0.0], 0.3).unwrap(),
            GroupElement::exp([1.0, 0.0, 0.0], 0.9).unwrap(),
        ];
        assert!(matches!(k.fox_jacobian(&rep), Err(Error::Precondition(_))));
    }

    /// Fox fundamental identity: the Jacobian annihilates principal
    /// derivations d⁰(v)(g) = v − Ad(ρ(g))·v.
    #[test]
    fn fox_fundamental_identity() {
        let k = Presentation::torus_knot(3, 5).unwrap();
        // An honest irreducible representation: u, v of angles π/3, π/5.
        let t: f64 = 1.2;
        let rep = vec![
            GroupElement::exp([1.0, 0.0, 0.0], PI / 3.0).unwrap(),
            GroupElement::exp([t.cos(), t.sin(), 0.0], PI / 5.0).unwrap(),
        ];
        let j = k.fox_jacobian(&rep).unwrap();
        for basis in 0..3 {
            let mut v = [0.0; 3];
            v[basis] = 1.0;
            let mut d0 = DMatrix::<f64>::zeros(6, 1);
            for (g, el) in rep.iter().enumerate() {
                let ad = adjoint_matrix(el);
                for i in 0..3 {
                    let adv: f64 = (0..3).map(|jj| ad[i][jj] * v[jj]).sum();
                    d0[(3 * g + i, 0)] = v[i] - adv;
                }
            }
            let prod = &j * &d0;
            assert!(prod.amax() < 1e-9, "J·d0 = {prod}");
        }
    }

    #[test]
    fn connected_sum_associative_on_homology_and_fox_rank() {
        let a = Presentation::torus_knot(2, 3).unwrap();
        let b = Presentation::torus_knot(2, 5).unwrap();
        let c = Presentation::torus_knot(3, 4).unwrap();
        let left = a.connected_sum(&b).unwrap().connected_sum(&c).unwrap();
        let right = a.connected_sum(&b.connected_sum(&c).unwrap()).unwrap();
        assert_eq!(left.first_homology(), right.first_homology());
        // Matched abelian representations at meridian angle 0.35.
        let x = 0.35;
        let build = |p: &Presentation| -> Vec<GroupElement> {
            let phi = p.abelianization_exponents().unwrap();
            phi.iter()
                .map(|&e| GroupElement::exp([1.0, 0.0, 0.0], e as f64 * x).unwrap())
                .collect()
        };
        let jl = left.fox_jacobian(&build(&left)).unwrap();
        let jr = right.fox_jacobian(&build(&right)).unwrap();
        assert_eq!(jl.rank(1e-9), jr.rank(1e-9));
    }

    /// Any valid meridian exponent pair gives the same group element:
    /// (m, n) and (m + p, n − q) differ by the relator u^p v^{−q}, which
    /// is central and trivial. The boundary images therefore do not
    /// depend on the word chosen for μ.
    #[test]
    fn meridian_word_choice_is_immaterial() {
        for (p, q) in [(3i64, 5i64), (2, 7), (-2, 7)] {
            let k = Presentation::torus_knot(p, q).unwrap();
            let per = k.peripheral.as_ref().unwrap();
            let sums = per.meridian.exponent_sums(2);
            let alt = Word::new([(0, sums[0] + p), (1, sums[1] - q)]);
            let alpha = PI * 1.0 / p.abs() as f64;
            let beta = PI * 1.0 / q as f64;
            for t in [0.3f64, 1.0, 2.2] {
                let rep = [
                    GroupElement::exp([1.0, 0.0, 0.0], alpha).unwrap(),
                    GroupElement::exp([t.cos(), t.sin(), 0.0], beta).unwrap(),
                ];
                let standard = per.meridian.evaluate(&rep).unwrap();
                let other = alt.evaluate(&rep).unwrap();
                assert!(
                    standard.dist(&other) < 1e-12,
                    "meridian words disagree for T({p},{q}) at t = {t}"
                );
            }
        }
    }

    #[test]
    fn presentation_json_round_trip_is_bit_exact() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for _ in 0..50 {
            let ng = rng.random_range(1..5usize);
            let relators: Vec<Word> = (0..rng.random_range(0..4usize))
                .map(|_| {
                    Word::new((0..rng.random_range(1..6usize)).map(|_| {
                        (rng.random_range(0..ng), rng.random_range(-3..=3i64))
                    }))
                })
                .collect();
            let pres = Presentation {
                num_generators: ng,
                relators,
                peripheral: Some(Peripheral {
                    meridian: Word::generator(0),
                    longitude: Word::identity(),
                }),
                label: "random".into(),
            };
            let text = serde_json::to_string(&pres).unwrap();
            let back: Presentation = serde_json::from_str(&text).unwrap();
            assert_eq!(pres, back);
            assert_eq!(text, serde_json::to_string(&back).unwrap());
        }
    }
}
