//! Discriminant groups `L*/L`, induced actions of isometries, the kernel
//! subgroup `O(L)*`, and overlattice gluing.
//!
//! The discriminant quadratic form is `q(x) = (x,x)` valued in `Q/2Z`; the
//! bilinear form is valued in `Q/Z`.

use std::collections::BTreeSet;

use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::arith::{
    common_denominator, int, integer_row_basis, modulo, rat_from_int, rat_matrix_to_int, rat_mod,
    serde_int_vec, serde_rat_vec, smith_normal_form, Int, IntMatrix, Matrix, Rat, RatMatrix,
};
use crate::error::{Error, Result};
use crate::lattice::{IntLattice, Isometry, StandardLattice};

/// The finite group `L*/L` with its discriminant forms.
#[derive(Clone, Debug)]
pub struct DiscriminantGroup {
    invariant_factors: Vec<Int>,
    generator_lifts: Vec<Vec<Rat>>,
    qvals: Vec<Rat>,
    bvals: RatMatrix,
    /// Rows map `x ∈ L*` (L-coordinates) to `Z^k`; reduce row `i` mod `dᵢ`.
    coord_map: RatMatrix,
}

/// Wire form `{invariant_factors, qvals}`.
#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
pub struct DiscriminantRecord {
    #[serde(with = "serde_int_vec")]
    pub invariant_factors: Vec<Int>,
    #[serde(with = "serde_rat_vec")]
    pub qvals: Vec<Rat>,
}

impl DiscriminantGroup {
    pub fn invariant_factors(&self) -> &[Int] {
        &self.invariant_factors
    }

    pub fn generator_lifts(&self) -> &[Vec<Rat>] {
        &self.generator_lifts
    }

    /// `q(gᵢ)` in `[0, 2)`.
    pub fn qvals(&self) -> &[Rat] {
        &self.qvals
    }

    /// `b(gᵢ, gⱼ)` in `[0, 1)`.
    pub fn bvals(&self) -> &RatMatrix {
        &self.bvals
    }

    pub fn order(&self) -> Int {
        self.invariant_factors.iter().product()
    }

    pub fn is_trivial(&self) -> bool {
        self.invariant_factors.is_empty()
    }

    pub fn to_record(&self) -> DiscriminantRecord {
        DiscriminantRecord {
            invariant_factors: self.invariant_factors.clone(),
            qvals: self.qvals.clone(),
        }
    }

    /// Coordinates in `⊕ Z/dᵢ` of an element of `L*`.
    pub fn coords(&self, x: &[Rat]) -> Result<Vec<Int>> {
        if x.len() != self.coord_map.cols() {
            return Err(Error::DimensionMismatch {
                expected: self.coord_map.cols(),
                got: x.len(),
            });
        }
        let y = self.coord_map.mul_vec(x);
        y.iter()
            .zip(&self.invariant_factors)
            .map(|(c, d)| {
                if c.is_integer() {
                    Ok(modulo(&c.to_integer(), d))
                } else {
                    Err(Error::BadGlue(format!("vector is not in the dual lattice (coordinate {c})")))
                }
            })
            .collect()
    }

    /// The element `Σ cᵢ gᵢ` as a rational vector in L-coordinates.
    pub fn lift(&self, coords: &[Int]) -> Vec<Rat> {
        let n = self.coord_map.cols();
        let mut out = vec![Rat::zero(); n];
        for (c, g) in coords.iter().zip(&self.generator_lifts) {
            let c = rat_from_int(c);
            for (o, gi) in out.iter_mut().zip(g) {
                *o += &c * gi;
            }
        }
        out
    }
}

/// `L*/L` via the Smith normal form of the Gram matrix.
pub fn discriminant_group(l: &IntLattice) -> Result<DiscriminantGroup> {
    let g = l.gram();
    if g.det().is_zero() {
        return Err(Error::Degenerate);
    }
    // left · G · right = D; L*/L ≅ Z^n / G Z^n ≅ ⊕ Z/dᵢ via y ↦ left·y,
    // and the generator of Z/dᵢ lifts to (column i of right)/dᵢ in L*.
    let smith = smith_normal_form(g);
    let keep: Vec<usize> = (0..smith.diagonal.len()).filter(|&i| !smith.diagonal[i].is_one()).collect();
    let invariant_factors: Vec<Int> = keep.iter().map(|&i| smith.diagonal[i].clone()).collect();
    let generator_lifts: Vec<Vec<Rat>> = keep
        .iter()
        .map(|&i| {
            let d = rat_from_int(&smith.diagonal[i]);
            smith.right.column(i).iter().map(|x| rat_from_int(x) / &d).collect()
        })
        .collect();
    let full = smith.left.mul(g).to_rat();
    let coord_map = Matrix::from_rows(keep.iter().map(|&i| full.row(i)).collect());
    let two = int(2);
    let one = int(1);
    let mut qvals = Vec::with_capacity(keep.len());
    for x in &generator_lifts {
        qvals.push(rat_mod(&l.bilinear_rat(x, x)?, &two));
    }
    let k = keep.len();
    let mut bvals = RatMatrix::zeros(k, k);
    for i in 0..k {
        for j in 0..k {
            bvals[(i, j)] = rat_mod(&l.bilinear_rat(&generator_lifts[i], &generator_lifts[j])?, &one);
        }
    }
    Ok(DiscriminantGroup {
        invariant_factors,
        generator_lifts,
        qvals,
        bvals,
        coord_map,
    })
}

/// Action of an isometry on `A_L`, column `i` holding the image of `gᵢ`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DiscAction {
    pub matrix: IntMatrix,
    pub moduli: Vec<Int>,
}

impl DiscAction {
    pub fn is_identity(&self) -> bool {
        let k = self.moduli.len();
        (0..k).all(|i| {
            (0..k).all(|j| {
                let want = if i == j { int(1) } else { int(0) };
                modulo(&(&self.matrix[(i, j)] - want), &self.moduli[i]).is_zero()
            })
        })
    }

    /// For a cyclic group, the multiplier `a` with `g·x = a x`.
    pub fn cyclic_multiplier(&self) -> Option<Int> {
        (self.moduli.len() == 1).then(|| self.matrix[(0, 0)].clone())
    }

    /// Applies the action to a coordinate vector.
    pub fn apply(&self, x: &[Int]) -> Vec<Int> {
        self.matrix
            .mul_vec(x)
            .iter()
            .zip(&self.moduli)
            .map(|(v, d)| modulo(v, d))
            .collect()
    }
}

pub fn induced_disc_action_on(
    l: &IntLattice,
    disc: &DiscriminantGroup,
    g: &Isometry,
) -> Result<DiscAction> {
    if !l.is_isometry(&g.matrix) {
        return Err(Error::NotAnIsometry(l.name().to_string()));
    }
    let gm = g.matrix.to_rat();
    let cols: Result<Vec<Vec<Int>>> = disc
        .generator_lifts
        .iter()
        .map(|x| disc.coords(&gm.mul_vec(x)))
        .collect();
    Ok(DiscAction {
        matrix: Matrix::from_columns(&cols?),
        moduli: disc.invariant_factors.clone(),
    })
}

pub fn induced_disc_action(l: &IntLattice, g: &Isometry) -> Result<DiscAction> {
    let disc = discriminant_group(l)?;
    induced_disc_action_on(l, &disc, g)
}

/// Membership in `O(L)* = Ker(O(L) → O(A_L))`.
pub fn in_kernel_star(l: &IntLattice, g: &Isometry) -> Result<bool> {
    Ok(induced_disc_action(l, g)?.is_identity())
}

/// Number of isometries of the discriminant form of `⟨2n⟩`: units `a` mod
/// `2n` with `a² ≡ 1 (mod 4n)`.
pub fn cyclic_disc_isometry_count(n: u64) -> u64 {
    assert!(n >= 1, "n must be positive");
    let m = 2 * n;
    let four_n = 4 * n as u128;
    (1..m)
        .filter(|&a| a.gcd(&m) == 1 && ((a as u128) * (a as u128)) % four_n == 1)
        .count() as u64
}

/// A finite-index overlattice of `N ⊕ K`.
#[derive(Clone, Debug)]
pub struct GlueData {
    n_lattice: IntLattice,
    k_lattice: IntLattice,
    ambient: IntLattice,
    /// `N ⊕ K` basis in its own coordinates (the identity).
    pub sub_basis: IntMatrix,
    /// Overlattice basis as columns in `N ⊕ K` coordinates.
    pub over_basis: RatMatrix,
    pub index: Int,
}

/// Wire form with `p/q` rational entries.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct GlueRecord {
    pub n_label: Option<String>,
    pub k_label: Option<String>,
    pub over_basis: RatMatrix,
    #[serde(with = "crate::arith::serde_int")]
    pub index: Int,
}

impl GlueData {
    /// Overlattice generated by `N ⊕ K` and the given rational glue vectors.
    pub fn from_glue_vectors(n: &IntLattice, k: &IntLattice, glue: &[Vec<Rat>]) -> Result<GlueData> {
        let ambient = n.direct_sum(k);
        let rank = ambient.rank();
        let mut gens: Vec<Vec<Rat>> = (0..rank)
            .map(|i| (0..rank).map(|j| if i == j { Rat::one() } else { Rat::zero() }).collect())
            .collect();
        for v in glue {
            if v.len() != rank {
                return Err(Error::DimensionMismatch {
                    expected: rank,
                    got: v.len(),
                });
            }
            gens.push(v.clone());
        }
        let denom = gens.iter().fold(Int::one(), |acc, g| acc.lcm(&common_denominator(g)));
        let dq = rat_from_int(&denom);
        let scaled: Vec<Vec<Int>> = gens
            .iter()
            .map(|g| g.iter().map(|x| (x * &dq).to_integer()).collect())
            .collect();
        let rows = integer_row_basis(&scaled);
        if rows.len() != rank {
            return Err(Error::BadGlue("generators do not span a full-rank lattice".into()));
        }
        let cols: Vec<Vec<Rat>> = rows
            .iter()
            .map(|r| r.iter().map(|x| rat_from_int(x) / &dq).collect())
            .collect();
        let over_basis = Matrix::from_columns(&cols);
        let det = over_basis.det();
        let inv_det = det.recip().abs();
        if !inv_det.is_integer() {
            return Err(Error::BadGlue(format!("basis determinant {det} is not 1/index")));
        }
        let gd = GlueData {
            n_lattice: n.clone(),
            k_lattice: k.clone(),
            ambient,
            sub_basis: IntMatrix::identity(rank),
            over_basis,
            index: inv_det.to_integer(),
        };
        let gram = gd.over_gram_rat();
        let Some(gram) = rat_matrix_to_int(&gram) else {
            return Err(Error::BadGlue("overlattice form is not integral".into()));
        };
        if !(0..rank).all(|i| gram[(i, i)].is_even()) {
            return Err(Error::BadGlue("overlattice form is not even".into()));
        }
        Ok(gd)
    }

    fn over_gram_rat(&self) -> RatMatrix {
        let b = &self.over_basis;
        b.transpose().mul(&self.ambient.gram().to_rat()).mul(b)
    }

    pub fn n_lattice(&self) -> &IntLattice {
        &self.n_lattice
    }

    pub fn k_lattice(&self) -> &IntLattice {
        &self.k_lattice
    }

    /// `N ⊕ K`.
    pub fn ambient(&self) -> &IntLattice {
        &self.ambient
    }

    /// The overlattice in its own basis.
    pub fn overlattice(&self) -> IntLattice {
        let gram = rat_matrix_to_int(&self.over_gram_rat()).expect("checked integral at construction");
        let label = format!("overlattice of {}", self.ambient.name());
        IntLattice::new(Some(label), gram).expect("finite-index overlattice is nondegenerate")
    }

    pub fn to_record(&self) -> GlueRecord {
        GlueRecord {
            n_label: self.n_lattice.label().map(str::to_string),
            k_label: self.k_lattice.label().map(str::to_string),
            over_basis: self.over_basis.clone(),
            index: self.index.clone(),
        }
    }

    /// Generators of the glue subgroup `H ⊂ A_N ⊕ A_K`, in discriminant coordinates.
    fn glue_subgroup(&self, dn: &DiscriminantGroup, dk: &DiscriminantGroup) -> Result<BTreeSet<(Vec<Int>, Vec<Int>)>> {
        let rn = self.n_lattice.rank();
        let mut gens = Vec::new();
        for j in 0..self.over_basis.cols() {
            let col = self.over_basis.column(j);
            gens.push((dn.coords(&col[..rn])?, dk.coords(&col[rn..])?));
        }
        // closure under addition; |H| equals the index, so this stays small
        let zero = (vec![int(0); dn.invariant_factors.len()], vec![int(0); dk.invariant_factors.len()]);
        let mut seen = BTreeSet::from([zero.clone()]);
        let mut frontier = vec![zero];
        while let Some(h) = frontier.pop() {
            for g in &gens {
                let s = (add_mod(&h.0, &g.0, &dn.invariant_factors), add_mod(&h.1, &g.1, &dk.invariant_factors));
                if seen.insert(s.clone()) {
                    frontier.push(s);
                }
            }
        }
        Ok(seen)
    }

    /// Whether `gN ⊕ gK` maps the glue subgroup to itself, decided purely on
    /// discriminant groups.
    pub fn respects_glue(&self, g_n: &Isometry, g_k: &Isometry) -> Result<bool> {
        let dn = discriminant_group(&self.n_lattice)?;
        let dk = discriminant_group(&self.k_lattice)?;
        let an = induced_disc_action_on(&self.n_lattice, &dn, g_n)?;
        let ak = induced_disc_action_on(&self.k_lattice, &dk, g_k)?;
        let h = self.glue_subgroup(&dn, &dk)?;
        Ok(h.iter().all(|(x, y)| h.contains(&(an.apply(x), ak.apply(y)))))
    }
}

fn add_mod(a: &[Int], b: &[Int], m: &[Int]) -> Vec<Int> {
    a.iter().zip(b).zip(m).map(|((x, y), d)| modulo(&(x + y), d)).collect()
}

/// `(U ⊕ M_n) ⊕ (U ⊕ M̌_n)` glued along `(v + w)/2n` into a unimodular lattice
/// of signature (4,20).
pub fn construct_mirror_embedding(n: i64) -> Result<GlueData> {
    let big_n = StandardLattice::UPlusMn(n).build()?;
    let k = StandardLattice::UPlusMcheckN(n).build()?;
    let rank = big_n.rank() + k.rank();
    let mut glue = vec![Rat::zero(); rank];
    let scale = Rat::new(int(1), int(2 * n));
    glue[1] = scale.clone();
    glue[big_n.rank() + 1] = scale;
    GlueData::from_glue_vectors(&big_n, &k, &[glue])
}

/// Block extension test: `Some(isometry of the overlattice)` if `gN ⊕ gK`
/// preserves the overlattice, `None` otherwise.
pub fn glue_extends(gd: &GlueData, g_n: &Isometry, g_k: &Isometry) -> Result<Option<Isometry>> {
    if !gd.n_lattice.is_isometry(&g_n.matrix) {
        return Err(Error::NotAnIsometry(gd.n_lattice.name().to_string()));
    }
    if !gd.k_lattice.is_isometry(&g_k.matrix) {
        return Err(Error::NotAnIsometry(gd.k_lattice.name().to_string()));
    }
    let block = g_n.matrix.block_diag(&g_k.matrix, int(0)).to_rat();
    let inv = gd
        .over_basis
        .inverse()
        .ok_or_else(|| Error::BadGlue("singular overlattice basis".into()))?;
    let m = inv.mul(&block).mul(&gd.over_basis);
    match rat_matrix_to_int(&m) {
        Some(m) => {
            let over = gd.overlattice();
            Ok(Some(over.isometry(m)?))
        }
        None => Ok(None),
    }
}

/// Moves an isometry of `U ⊕ ⟨2n⟩` (basis `e, v, f`) to `U ⊕ M̌_n` acting on
/// `(ě, w, f̌)` and trivially elsewhere, via `g ↦ D g D` with `D = diag(1,1,-1)`.
/// The induced action on `⟨-2n⟩*/⟨-2n⟩` has the same multiplier.
pub fn mirror_transport(g: &Isometry, n: i64) -> Result<Isometry> {
    let k = StandardLattice::UPlusMcheckN(n).build()?;
    let r = k.rank();
    let pos = [0usize, 1, r - 1];
    let sign = [1i64, 1, -1];
    let mut m = IntMatrix::identity(r);
    for (a, &i) in pos.iter().enumerate() {
        for (b, &j) in pos.iter().enumerate() {
            m[(i, j)] = &g.matrix[(a, b)] * int(sign[a] * sign[b]);
        }
    }
    k.isometry(m)
}
