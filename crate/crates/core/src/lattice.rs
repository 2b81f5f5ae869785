//! Integer lattices given by a Gram matrix, their isometries, signatures and
//! the orientation character on maximal positive-definite subspaces.
//!
//! Every hyperbolic plane `U` in this crate has Gram `[[0,-1],[-1,0]]`, and a
//! hyperbolic extension `U ⊕ M` is stored in the basis `(e, M..., f)` so that
//! `U ⊕ ⟨2n⟩` has Gram `[[0,0,-1],[0,2n,0],[-1,0,0]]`.

use std::fmt;
use std::str::FromStr;

use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::arith::{imat, int, rat_from_int, Int, IntMatrix, Matrix, Rat, RatMatrix};
use crate::error::{Error, Result};

/// The standard lattices this crate knows how to build.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum StandardLattice {
    /// Hyperbolic plane, basis `(e, f)`.
    U,
    /// Negative-definite E8.
    E8Minus,
    /// `⟨2n⟩`.
    TwoN(i64),
    /// `⟨-2n⟩`.
    MinusTwoN(i64),
    /// `E8(-1)² ⊕ U³`, signature (3,19).
    K3,
    /// `H⁰ ⊕ Λ_K3 ⊕ H⁴` with the Mukai pairing, signature (4,20).
    Mukai,
    /// `U ⊕ ⟨2n⟩` in basis `(e, v, f)`.
    UPlusMn(i64),
    /// `⟨-2n⟩ ⊕ U ⊕ E8(-1)²`, the orthogonal complement sibling of `⟨2n⟩`.
    McheckN(i64),
    /// `U ⊕ M̌_n` in basis `(ě, M̌_n..., f̌)`.
    UPlusMcheckN(i64),
}

impl StandardLattice {
    /// Parses a lattice name together with its optional parameter.
    pub fn parse(name: &str, n: Option<i64>) -> Result<Self> {
        let need = |n: Option<i64>| -> Result<i64> {
            match n {
                Some(v) if v > 0 => Ok(v),
                Some(v) => Err(Error::NonPositiveParameter(v)),
                None => Err(Error::NonPositiveParameter(0)),
            }
        };
        Ok(match name {
            "U" => StandardLattice::U,
            "E8minus" => StandardLattice::E8Minus,
            "K3" => StandardLattice::K3,
            "Mukai" => StandardLattice::Mukai,
            "two_n" => StandardLattice::TwoN(need(n)?),
            "minus_two_n" => StandardLattice::MinusTwoN(need(n)?),
            "U_plus_Mn" => StandardLattice::UPlusMn(need(n)?),
            "Mcheck_n" => StandardLattice::McheckN(need(n)?),
            "U_plus_Mcheck_n" => StandardLattice::UPlusMcheckN(need(n)?),
            other => return Err(Error::UnknownLattice(other.to_string())),
        })
    }

    pub fn build(self) -> Result<IntLattice> {
        let check = |n: i64| if n > 0 { Ok(n) } else { Err(Error::NonPositiveParameter(n)) };
        Ok(match self {
            StandardLattice::U => hyperbolic_plane(),
            StandardLattice::E8Minus => e8_minus(),
            StandardLattice::TwoN(n) => {
                let n = check(n)?;
                IntLattice::new_unchecked(Some(format!("<{}>", 2 * n)), imat(&[&[2 * n]]))
            }
            StandardLattice::MinusTwoN(n) => {
                let n = check(n)?;
                IntLattice::new_unchecked(Some(format!("<{}>", -2 * n)), imat(&[&[-2 * n]]))
            }
            StandardLattice::K3 => {
                let e8 = e8_minus();
                let u = hyperbolic_plane();
                e8.direct_sum(&e8)
                    .direct_sum(&u)
                    .direct_sum(&u)
                    .direct_sum(&u)
                    .with_label("K3")
            }
            StandardLattice::Mukai => hyperbolic_extension(&StandardLattice::K3.build()?).with_label("Mukai"),
            StandardLattice::UPlusMn(n) => {
                let m = StandardLattice::TwoN(n).build()?;
                let mut l = hyperbolic_extension(&m).with_label(&format!("U+M_{n}"));
                // e - f and v span a positive plane
                l.positive_basis = Some(vec![
                    vec![int(1), int(0), int(-1)],
                    vec![int(0), int(1), int(0)],
                ]);
                l
            }
            StandardLattice::McheckN(n) => {
                let e8 = e8_minus();
                StandardLattice::MinusTwoN(n)
                    .build()?
                    .direct_sum(&hyperbolic_plane())
                    .direct_sum(&e8)
                    .direct_sum(&e8)
                    .with_label(&format!("Mcheck_{n}"))
            }
            StandardLattice::UPlusMcheckN(n) => {
                hyperbolic_extension(&StandardLattice::McheckN(n).build()?).with_label(&format!("U+Mcheck_{n}"))
            }
        })
    }
}

impl FromStr for StandardLattice {
    type Err = Error;

    /// Accepts `name` or `name:n`, e.g. `U_plus_Mn:6`.
    fn from_str(s: &str) -> Result<Self> {
        match s.split_once(':') {
            Some((name, n)) => {
                let n: i64 = n.parse().map_err(|_| Error::UnknownLattice(s.to_string()))?;
                StandardLattice::parse(name, Some(n))
            }
            None => StandardLattice::parse(s, None),
        }
    }
}

/// Builds one of the standard lattices by name.
pub fn make_standard(name: &str, n: Option<i64>) -> Result<IntLattice> {
    StandardLattice::parse(name, n)?.build()
}

fn hyperbolic_plane() -> IntLattice {
    IntLattice::new_unchecked(Some("U".into()), imat(&[&[0, -1], &[-1, 0]]))
}

fn e8_minus() -> IntLattice {
    // Bourbaki numbering: chain 1-3-4-5-6-7-8 with node 2 attached to node 4.
    const EDGES: [(usize, usize); 7] = [(0, 2), (2, 3), (3, 4), (4, 5), (5, 6), (6, 7), (1, 3)];
    let mut g = Matrix::from_fn(8, 8, |i, j| if i == j { int(-2) } else { int(0) });
    for (a, b) in EDGES {
        g[(a, b)] = int(1);
        g[(b, a)] = int(1);
    }
    IntLattice::new_unchecked(Some("E8(-1)".into()), g)
}

/// `U ⊕ M` in the basis `(e, M..., f)`, with `⟨e,f⟩ = -1`.
pub fn hyperbolic_extension(inner: &IntLattice) -> IntLattice {
    let r = inner.rank();
    let n = r + 2;
    let g = Matrix::from_fn(n, n, |i, j| {
        if (i == 0 && j == n - 1) || (i == n - 1 && j == 0) {
            int(-1)
        } else if (1..=r).contains(&i) && (1..=r).contains(&j) {
            inner.gram[(i - 1, j - 1)].clone()
        } else {
            int(0)
        }
    });
    IntLattice::new_unchecked(inner.label.as_ref().map(|l| format!("U+{l}")), g)
}

/// A free Z-module with a symmetric nondegenerate integer Gram matrix.
#[derive(Clone, PartialEq, Eq)]
pub struct IntLattice {
    label: Option<String>,
    gram: IntMatrix,
    positive_basis: Option<Vec<Vec<Int>>>,
}

impl fmt::Debug for IntLattice {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "IntLattice({}, {:?})", self.name(), self.gram)
    }
}

/// Wire form `{label, rank, gram}` with decimal-string entries.
#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
pub struct LatticeRecord {
    pub label: Option<String>,
    pub rank: usize,
    pub gram: IntMatrix,
}

impl IntLattice {
    pub fn new(label: Option<String>, gram: IntMatrix) -> Result<Self> {
        if !gram.is_symmetric() {
            return Err(Error::NotSymmetric);
        }
        if gram.rows() == 0 || gram.det().is_zero() {
            return Err(Error::Degenerate);
        }
        Ok(IntLattice::new_unchecked(label, gram))
    }

    fn new_unchecked(label: Option<String>, gram: IntMatrix) -> Self {
        IntLattice {
            label,
            gram,
            positive_basis: None,
        }
    }

    fn with_label(mut self, label: &str) -> Self {
        self.label = Some(label.to_string());
        self
    }

    pub fn label(&self) -> Option<&str> {
        self.label.as_deref()
    }

    pub fn name(&self) -> &str {
        self.label.as_deref().unwrap_or("<lattice>")
    }

    pub fn rank(&self) -> usize {
        self.gram.rows()
    }

    pub fn gram(&self) -> &IntMatrix {
        &self.gram
    }

    pub fn det(&self) -> Int {
        self.gram.det()
    }

    pub fn is_unimodular(&self) -> bool {
        self.det().abs().is_one()
    }

    pub fn is_even(&self) -> bool {
        (0..self.rank()).all(|i| self.gram[(i, i)].is_even())
    }

    pub fn to_record(&self) -> LatticeRecord {
        LatticeRecord {
            label: self.label.clone(),
            rank: self.rank(),
            gram: self.gram.clone(),
        }
    }

    pub fn from_record(rec: &LatticeRecord) -> Result<Self> {
        if rec.gram.rows() != rec.rank || rec.gram.cols() != rec.rank {
            return Err(Error::DimensionMismatch {
                expected: rec.rank,
                got: rec.gram.rows(),
            });
        }
        IntLattice::new(rec.label.clone(), rec.gram.clone())
    }

    fn check_len(&self, len: usize) -> Result<()> {
        if len == self.rank() {
            Ok(())
        } else {
            Err(Error::DimensionMismatch {
                expected: self.rank(),
                got: len,
            })
        }
    }

    /// `xᵀ G y` for integer coordinate vectors.
    pub fn bilinear(&self, x: &[Int], y: &[Int]) -> Result<Int> {
        self.check_len(x.len())?;
        self.check_len(y.len())?;
        let gy = self.gram.mul_vec(y);
        Ok(x.iter().zip(&gy).map(|(a, b)| a * b).sum())
    }

    /// `xᵀ G y` for rational coordinate vectors.
    pub fn bilinear_rat(&self, x: &[Rat], y: &[Rat]) -> Result<Rat> {
        self.check_len(x.len())?;
        self.check_len(y.len())?;
        let mut acc = Rat::zero();
        for i in 0..self.rank() {
            if x[i].is_zero() {
                continue;
            }
            for j in 0..self.rank() {
                let g = &self.gram[(i, j)];
                if g.is_zero() || y[j].is_zero() {
                    continue;
                }
                acc += &x[i] * &y[j] * rat_from_int(g);
            }
        }
        Ok(acc)
    }

    /// Block-diagonal sum, basis of `self` first.
    pub fn direct_sum(&self, other: &IntLattice) -> IntLattice {
        let label = match (&self.label, &other.label) {
            (Some(a), Some(b)) => Some(format!("{a}+{b}")),
            _ => None,
        };
        IntLattice::new_unchecked(label, self.gram.block_diag(&other.gram, int(0)))
    }

    /// Congruence diagonalization over Q: returns `(P, d)` with
    /// `Pᵀ G P = diag(d)`; columns of `P` are the new basis.
    pub fn diagonalize(&self) -> (RatMatrix, Vec<Rat>) {
        let n = self.rank();
        let mut a = self.gram.to_rat();
        let mut p = RatMatrix::identity(n);
        let add_to = |m: &mut RatMatrix, dst: usize, src: usize, f: &Rat, rows: bool, cols: bool| {
            if rows {
                for j in 0..m.cols() {
                    let t = f * &m[(src, j)];
                    m[(dst, j)] += t;
                }
            }
            if cols {
                for i in 0..m.rows() {
                    let t = f * &m[(i, src)];
                    m[(i, dst)] += t;
                }
            }
        };
        for k in 0..n {
            if a[(k, k)].is_zero() {
                if let Some(j) = (k + 1..n).find(|&j| !a[(j, j)].is_zero()) {
                    a.swap_rows(k, j);
                    a.swap_cols(k, j);
                    p.swap_cols(k, j);
                } else if let Some(j) = (k + 1..n).find(|&j| !a[(k, j)].is_zero()) {
                    let one = Rat::one();
                    add_to(&mut a, k, j, &one, true, true);
                    add_to(&mut p, k, j, &one, false, true);
                } else {
                    continue;
                }
            }
            let piv = a[(k, k)].clone();
            for i in k + 1..n {
                if a[(i, k)].is_zero() {
                    continue;
                }
                let f = -(&a[(i, k)] / &piv);
                add_to(&mut a, i, k, &f, true, true);
                add_to(&mut p, i, k, &f, false, true);
            }
        }
        let d = (0..n).map(|i| a[(i, i)].clone()).collect();
        (p, d)
    }

    /// `(p, q)`: numbers of positive and negative squares.
    pub fn signature(&self) -> Result<(usize, usize)> {
        let (_, d) = self.diagonalize();
        if d.iter().any(Zero::is_zero) {
            return Err(Error::Degenerate);
        }
        let p = d.iter().filter(|x| x.is_positive()).count();
        Ok((p, d.len() - p))
    }

    /// Basis of the canonical maximal positive-definite subspace used by the
    /// orientation character.
    pub fn positive_basis(&self) -> Result<Vec<Vec<Rat>>> {
        if let Some(b) = &self.positive_basis {
            return Ok(b.iter().map(|v| v.iter().map(rat_from_int).collect()).collect());
        }
        let (p, d) = self.diagonalize();
        let basis: Vec<Vec<Rat>> = (0..self.rank())
            .filter(|&i| d[i].is_positive())
            .map(|i| p.column(i))
            .collect();
        if basis.is_empty() {
            Err(Error::NoPositiveSubspace(self.name().to_string()))
        } else {
            Ok(basis)
        }
    }

    /// True iff `Mᵀ G M = G`.
    pub fn is_isometry(&self, m: &IntMatrix) -> bool {
        m.is_square()
            && m.rows() == self.rank()
            && m.transpose().mul(&self.gram).mul(m) == self.gram
    }

    pub fn isometry(&self, m: IntMatrix) -> Result<Isometry> {
        if self.is_isometry(&m) {
            Ok(Isometry {
                lattice_label: self.label.clone(),
                matrix: m,
            })
        } else {
            Err(Error::NotAnIsometry(self.name().to_string()))
        }
    }

    pub fn identity_isometry(&self) -> Isometry {
        Isometry {
            lattice_label: self.label.clone(),
            matrix: IntMatrix::identity(self.rank()),
        }
    }

    /// Sign of `g` on the canonical positive subspace; `g ∈ O⁺(L)` iff `+1`.
    pub fn orientation_sign_positive(&self, g: &Isometry) -> Result<i32> {
        if !self.is_isometry(&g.matrix) {
            return Err(Error::NotAnIsometry(self.name().to_string()));
        }
        let basis = self.positive_basis()?;
        let gm = g.matrix.to_rat();
        let images: Vec<Vec<Rat>> = basis.iter().map(|b| gm.mul_vec(b)).collect();
        // det of ⟨g pᵢ, pⱼ⟩ has the sign of the projection determinant,
        // because the Gram of the pⱼ is positive definite.
        let k = basis.len();
        let mut proj = RatMatrix::zeros(k, k);
        for i in 0..k {
            for j in 0..k {
                proj[(i, j)] = self.bilinear_rat(&images[i], &basis[j])?;
            }
        }
        let det = proj.det();
        if det.is_zero() {
            Err(Error::SingularProjection(self.name().to_string()))
        } else if det.is_positive() {
            Ok(1)
        } else {
            Ok(-1)
        }
    }
}

/// An integer matrix preserving a Gram form, acting on coordinate columns.
#[derive(Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Isometry {
    pub lattice_label: Option<String>,
    pub matrix: IntMatrix,
}

impl fmt::Debug for Isometry {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Isometry({:?})", self.matrix)
    }
}

impl Isometry {
    pub fn det(&self) -> Int {
        self.matrix.det()
    }

    pub fn compose(&self, other: &Isometry) -> Isometry {
        Isometry {
            lattice_label: self.lattice_label.clone(),
            matrix: self.matrix.mul(&other.matrix),
        }
    }

    pub fn inverse(&self) -> Isometry {
        Isometry {
            lattice_label: self.lattice_label.clone(),
            matrix: self
                .matrix
                .unimodular_inverse()
                .expect("isometries are unimodular"),
        }
    }

    pub fn negate(&self) -> Isometry {
        Isometry {
            lattice_label: self.lattice_label.clone(),
            matrix: -&self.matrix,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn v(xs: &[i64]) -> Vec<Int> {
        xs.iter().map(|&x| int(x)).collect()
    }

    #[test]
    fn sigma_for_degree_twelve() {
        let l = make_standard("U_plus_Mn", Some(6)).unwrap();
        assert_eq!(l.gram(), &imat(&[&[0, 0, -1], &[0, 12, 0], &[-1, 0, 0]]));
        assert_eq!(make_standard("two_n", Some(1)).unwrap().gram(), &imat(&[&[2]]));
    }

    #[test]
    fn unknown_and_bad_parameters() {
        assert!(matches!(make_standard("E7", None), Err(Error::UnknownLattice(_))));
        assert!(matches!(make_standard("two_n", Some(0)), Err(Error::NonPositiveParameter(0))));
        assert!(matches!(make_standard("U_plus_Mn", Some(-3)), Err(Error::NonPositiveParameter(-3))));
        assert!(make_standard("two_n", None).is_err());
    }

    #[test]
    fn standard_signatures_and_parity() {
        let cases: [(&str, Option<i64>, (usize, usize)); 7] = [
            ("U", None, (1, 1)),
            ("E8minus", None, (0, 8)),
            ("K3", None, (3, 19)),
            ("Mukai", None, (4, 20)),
            ("U_plus_Mn", Some(6), (2, 1)),
            ("Mcheck_n", Some(6), (1, 18)),
            ("minus_two_n", Some(6), (0, 1)),
        ];
        for (name, n, sig) in cases {
            let l = make_standard(name, n).unwrap();
            assert_eq!(l.signature().unwrap(), sig, "{name}");
            assert!(l.is_even(), "{name}");
        }
        assert!(make_standard("E8minus", None).unwrap().is_unimodular());
        assert!(make_standard("K3", None).unwrap().is_unimodular());
        assert!(make_standard("Mukai", None).unwrap().is_unimodular());
    }

    #[test]
    fn bilinear_examples() {
        let u = make_standard("U", None).unwrap();
        assert_eq!(u.bilinear(&v(&[1, 0]), &v(&[0, 1])).unwrap(), int(-1));
        let m = make_standard("two_n", Some(6)).unwrap();
        assert_eq!(m.bilinear(&v(&[1]), &v(&[1])).unwrap(), int(12));
        let l = make_standard("U_plus_Mn", Some(6)).unwrap();
        let emf = v(&[1, 0, -1]);
        assert_eq!(l.bilinear(&emf, &emf).unwrap(), int(2));
        assert!(matches!(
            l.bilinear(&v(&[1, 0]), &emf),
            Err(Error::DimensionMismatch { expected: 3, got: 2 })
        ));
    }

    #[test]
    fn direct_sum_examples() {
        let u = make_standard("U", None).unwrap();
        let m = make_standard("two_n", Some(6)).unwrap();
        assert_eq!(u.direct_sum(&m).rank(), 3);
        assert_eq!(u.direct_sum(&u).det(), int(1));
        assert_eq!(u.direct_sum(&m).det(), int(-12));
        assert_eq!(u.direct_sum(&m).det().abs(), int(12));
    }

    #[test]
    fn degenerate_and_asymmetric_grams_rejected() {
        assert_eq!(IntLattice::new(None, imat(&[&[1, 1], &[1, 1]])), Err(Error::Degenerate));
        assert_eq!(IntLattice::new(None, imat(&[&[0, 1], &[2, 0]])), Err(Error::NotSymmetric));
    }

    #[test]
    fn isometry_checks() {
        let l = make_standard("U_plus_Mn", Some(6)).unwrap();
        assert!(l.is_isometry(&IntMatrix::identity(3)));
        assert!(l.is_isometry(&imat(&[&[0, 0, -1], &[0, 1, 0], &[-1, 0, 0]])));
        assert!(!l.is_isometry(&imat(&[&[1, 0, 0], &[0, 2, 0], &[0, 0, 1]])));
        assert!(l.isometry(imat(&[&[1, 0, 0], &[0, 2, 0], &[0, 0, 1]])).is_err());
    }

    #[test]
    fn orientation_examples() {
        let l = make_standard("U_plus_Mn", Some(6)).unwrap();
        let flip_u = l.isometry(imat(&[&[-1, 0, 0], &[0, 1, 0], &[0, 0, -1]])).unwrap();
        assert_eq!(l.orientation_sign_positive(&flip_u).unwrap(), -1);
        let s1 = l.isometry(imat(&[&[0, 0, -1], &[0, 1, 0], &[-1, 0, 0]])).unwrap();
        assert_eq!(l.orientation_sign_positive(&s1).unwrap(), 1);
        let minus = l.identity_isometry().negate();
        assert_eq!(l.orientation_sign_positive(&minus).unwrap(), 1);
    }

    #[test]
    fn derived_positive_basis_is_positive() {
        let l = make_standard("Mukai", None).unwrap();
        let b = l.positive_basis().unwrap();
        assert_eq!(b.len(), 4);
        for x in &b {
            assert!(l.bilinear_rat(x, x).unwrap().is_positive());
        }
        let e8 = make_standard("E8minus", None).unwrap();
        assert!(matches!(e8.positive_basis(), Err(Error::NoPositiveSubspace(_))));
    }

    #[test]
    fn record_round_trip() {
        let l = make_standard("U_plus_Mn", Some(6)).unwrap();
        let json = serde_json::to_string(&l.to_record()).unwrap();
        assert_eq!(json, r#"{"label":"U+M_6","rank":3,"gram":[["0","0","-1"],["0","12","0"],["-1","0","0"]]}"#);
        let back: LatticeRecord = serde_json::from_str(&json).unwrap();
        assert_eq!(IntLattice::from_record(&back).unwrap().gram(), l.gram());
    }
}
