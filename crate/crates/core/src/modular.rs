//! Arithmetic of `Γ₀(n)+` and its image in `SO(2,1)`: fractional linear
//! elements `m/√r`, the dictionary `R` into isometries of `U ⊕ ⟨2n⟩`, the
//! degree-12 monodromy matrices, and the index computations relating
//! Fourier–Mukai partners to symplectic monodromy.

use std::fmt;

use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::Serialize;
use serde_json::{json, Value};

use crate::arith::{
    int, largest_square_divisor_root, prime_factors, rat_from_int, rat_matrix_to_int, Int, IntMatrix, Matrix,
    RatMatrix,
};
use crate::discriminant::{
    construct_mirror_embedding, cyclic_disc_isometry_count, glue_extends, in_kernel_star, induced_disc_action,
};
use crate::error::{Error, Result};
use crate::lattice::{IntLattice, Isometry, StandardLattice};

/// The element `m/√scale` of `PSL(2, R)`, with `det m = scale`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct FracLinear {
    m: [Int; 4],
    scale: Int,
}

impl Serialize for FracLinear {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        use serde::ser::SerializeStruct;
        let mut st = s.serialize_struct("FracLinear", 2)?;
        st.serialize_field("m", &self.m.iter().map(ToString::to_string).collect::<Vec<_>>())?;
        st.serialize_field("scale", &self.scale.to_string())?;
        st.end()
    }
}

impl fmt::Debug for FracLinear {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self)
    }
}

impl fmt::Display for FracLinear {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let [a, b, c, d] = &self.m;
        if self.scale.is_one() {
            write!(f, "({a},{b};{c},{d})")
        } else {
            write!(f, "({a},{b};{c},{d})/√{}", self.scale)
        }
    }
}

impl FracLinear {
    /// Validates `det m = scale > 0` and fixes the projective sign.
    pub fn new(m: [Int; 4], scale: Int) -> Result<Self> {
        let det = &m[0] * &m[3] - &m[1] * &m[2];
        if det != scale || !scale.is_positive() {
            return Err(Error::BadScale {
                det: det.to_string(),
                scale: scale.to_string(),
            });
        }
        let mut g = FracLinear { m, scale };
        g.fix_sign();
        Ok(g)
    }

    pub fn from_i64(m: [i64; 4], scale: i64) -> Result<Self> {
        FracLinear::new(m.map(int), int(scale))
    }

    /// Projective sign: lower row `(c, d)` with `c > 0`, or `c = 0, d > 0`.
    fn fix_sign(&mut self) {
        if let Some(first) = self.m[2..].iter().find(|x| !x.is_zero()) {
            if first.is_negative() {
                for x in self.m.iter_mut() {
                    *x = -&*x;
                }
            }
        }
    }

    pub fn matrix(&self) -> &[Int; 4] {
        &self.m
    }

    pub fn scale(&self) -> &Int {
        &self.scale
    }

    pub fn identity() -> Self {
        FracLinear::from_i64([1, 0, 0, 1], 1).expect("valid")
    }

    /// Matrix product with the square part of `r_g r_h` absorbed into `m`.
    pub fn compose(&self, other: &FracLinear) -> Result<FracLinear> {
        let [a, b, c, d] = &self.m;
        let [e, f, g, h] = &other.m;
        let prod = [a * e + b * g, a * f + b * h, c * e + d * g, c * f + d * h];
        let r = &self.scale * &other.scale;
        let s = largest_square_divisor_root(&r);
        if prod.iter().any(|x| !x.is_multiple_of(&s)) {
            return Err(Error::NonIntegralComposition(format!(
                "{self} · {other} = ({},{};{},{})/√{r}",
                prod[0], prod[1], prod[2], prod[3]
            )));
        }
        let reduced = prod.map(|x| x / &s);
        FracLinear::new(reduced, r / (&s * &s))
    }

    pub fn pow(&self, e: u32) -> Result<FracLinear> {
        (0..e).try_fold(FracLinear::identity(), |acc, _| acc.compose(self))
    }

    /// `d/√r · (d, -b; -c, a)` — the inverse, again with det `r`.
    pub fn inverse(&self) -> FracLinear {
        let [a, b, c, d] = &self.m;
        FracLinear::new([d.clone(), -b, -c, a.clone()], self.scale.clone()).expect("same determinant")
    }

    /// Membership in the normalizer-type group `Γ₀(n)+`: `m = (r·α, β; n·γ, r·δ)`
    /// with `r ‖ n`.
    pub fn in_gamma0_plus(&self, n: i64) -> bool {
        let r = &self.scale;
        let n = int(n);
        if !n.is_multiple_of(r) || !(&n / r).gcd(r).is_one() {
            return false;
        }
        let [a, _, c, d] = &self.m;
        a.is_multiple_of(r) && d.is_multiple_of(r) && c.is_multiple_of(&n)
    }
}

/// The Atkin–Lehner element `W_r` of level `n` for an exact divisor `r ‖ n`:
/// `(r·a, b; n, r)/√r` with the least positive `a` making the determinant `r`.
pub fn atkin_lehner(n: i64, r: i64) -> Result<FracLinear> {
    if n < 1 || r < 1 || n % r != 0 || int(r).gcd(&int(n / r)) != int(1) {
        return Err(Error::NotExactDivisor { r, n });
    }
    if r == 1 {
        return Ok(FracLinear::identity());
    }
    if r == n {
        return FracLinear::from_i64([0, -1, n, 0], n);
    }
    let q = n / r;
    let a = (1..=q).find(|a| (r * a) % q == 1 % q).expect("r invertible mod n/r");
    let b = (r * a - 1) / q;
    FracLinear::from_i64([r * a, b, n, r], r)
}

/// `T = (1,1;0,1)`.
pub fn translation() -> FracLinear {
    FracLinear::from_i64([1, 1, 0, 1], 1).expect("valid")
}

/// The Fricke involution `(0,-1;n,0)/√n`.
pub fn fricke(n: i64) -> Result<FracLinear> {
    if n < 1 {
        return Err(Error::NonPositiveParameter(n));
    }
    FracLinear::from_i64([0, -1, n, 0], n)
}

/// Which group the generators are requested for.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Gamma0Variant {
    /// `Γ₀(n)+`, all Atkin–Lehner involutions adjoined.
    Plus,
    /// `Γ₀(n)+n`, only the Fricke involution adjoined.
    PlusN,
}

/// Generators of `Γ₀(6)+` or `Γ₀(6)+6`. For other levels only `T` and the
/// Fricke element are known in closed form, which is what `Plus` returns.
pub fn gamma0_plus_generators(n: i64, variant: Gamma0Variant) -> Result<Vec<FracLinear>> {
    match (n, variant) {
        (6, Gamma0Variant::Plus) => Ok(vec![translation(), fricke(6)?, atkin_lehner(6, 3)?]),
        (6, Gamma0Variant::PlusN) => Ok(vec![translation(), fricke(6)?, atkin_lehner(6, 3)?.pow(2)?]),
        (n, Gamma0Variant::Plus) if n >= 1 => Ok(vec![translation(), fricke(n)?]),
        (n, _) => Err(Error::UnsupportedLevel(n)),
    }
}

/// `S₁ = (0,-1;6,0)/√6`, the monodromy about the conifold `x = 1/36`.
pub fn s1() -> FracLinear {
    fricke(6).expect("valid")
}

/// `S₂ = (-2,1;-6,2)/√2`, the monodromy about `x = 1/4`.
pub fn s2() -> FracLinear {
    FracLinear::from_i64([-2, 1, -6, 2], 2).expect("valid")
}

/// A rational `3×3` matrix preserving `Σ`, the Gram of `U ⊕ ⟨2n⟩` in the
/// basis `(e, v, f)`.
#[derive(Clone, PartialEq, Eq, Serialize)]
pub struct SoMatrix {
    pub n: i64,
    pub matrix: RatMatrix,
}

impl fmt::Debug for SoMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "SoMatrix({:?})", self.matrix)
    }
}

pub fn sigma(n: i64) -> IntMatrix {
    StandardLattice::UPlusMn(n).build().expect("n ≥ 1").gram().clone()
}

impl SoMatrix {
    pub fn new(n: i64, matrix: RatMatrix) -> Result<Self> {
        let g = SoMatrix { n, matrix };
        if g.matrix.rows() != 3 || g.matrix.cols() != 3 || !g.preserves_form() {
            return Err(Error::NotAnIsometry(format!("U+M_{n}")));
        }
        Ok(g)
    }

    pub fn from_isometry(n: i64, g: &Isometry) -> Result<Self> {
        SoMatrix::new(n, g.matrix.to_rat())
    }

    pub fn preserves_form(&self) -> bool {
        let s = sigma(self.n).to_rat();
        self.matrix.transpose().mul(&s).mul(&self.matrix) == s
    }

    pub fn det(&self) -> crate::arith::Rat {
        self.matrix.det()
    }

    pub fn mul(&self, other: &SoMatrix) -> SoMatrix {
        SoMatrix {
            n: self.n,
            matrix: self.matrix.mul(&other.matrix),
        }
    }

    pub fn neg(&self) -> SoMatrix {
        SoMatrix {
            n: self.n,
            matrix: -&self.matrix,
        }
    }

    pub fn to_int(&self) -> Option<IntMatrix> {
        rat_matrix_to_int(&self.matrix)
    }

    /// The integral isometry of `U ⊕ M_n`, if all entries are integers.
    pub fn to_isometry(&self) -> Result<Isometry> {
        let m = self
            .to_int()
            .ok_or_else(|| Error::NotAnIsometry(format!("U+M_{} (non-integral)", self.n)))?;
        StandardLattice::UPlusMn(self.n).build()?.isometry(m)
    }
}

/// `R(m/√r)` for `m = (a,b;c,d)`: the symmetric-square action on `U ⊕ ⟨2n⟩`,
/// ```text
///   [ a²    2ac      c²/n ]
///   [ ab    ad+bc    cd/n ]   / r
///   [ n b²  2n bd    d²   ]
/// ```
/// an anti-homomorphism: `R(gh) = R(h)R(g)`.
pub fn r_map(g: &FracLinear, n: i64) -> Result<SoMatrix> {
    if n < 1 {
        return Err(Error::NonPositiveParameter(n));
    }
    let [a, b, c, d] = g.m.clone().map(|x| rat_from_int(&x));
    let nn = rat_from_int(&int(n));
    let two = rat_from_int(&int(2));
    let rows = vec![
        vec![&a * &a, &two * &a * &c, &c * &c / &nn],
        vec![&a * &b, &a * &d + &b * &c, &c * &d / &nn],
        vec![&nn * &b * &b, &two * &nn * &b * &d, &d * &d],
    ];
    let r = rat_from_int(&g.scale);
    let m = Matrix::from_rows(rows).map(|x| x / &r);
    SoMatrix::new(n, m)
}

/// `F(g) = det(g)·g`, mapping `O⁺(U ⊕ M_n)` onto its special part.
pub fn f_map(n: i64, g: &Isometry) -> Result<SoMatrix> {
    let l = StandardLattice::UPlusMn(n).build()?;
    if !l.is_isometry(&g.matrix) {
        return Err(Error::NotAnIsometry(l.name().to_string()));
    }
    let det = g.det();
    Ok(SoMatrix {
        n,
        matrix: g.matrix.to_rat().map(|x| x * rat_from_int(&det)),
    })
}

/// The three monodromy matrices of the degree-12 family with the sign choice
/// `T̄ = R(T)`, `S̄₁ = −R(S₁)`, `S̄₂ = −R(S₂)`.
#[derive(Clone, Debug, Serialize)]
pub struct Table1 {
    pub t_bar: IntMatrix,
    pub s1_bar: IntMatrix,
    pub s2_bar: IntMatrix,
}

pub fn table1(n: i64) -> Result<Table1> {
    if n != 6 {
        return Err(Error::UnsupportedLevel(n));
    }
    let int_of = |g: SoMatrix| g.to_int().expect("integral for level 6");
    Ok(Table1 {
        t_bar: int_of(r_map(&translation(), 6)?),
        s1_bar: int_of(r_map(&s1(), 6)?.neg()),
        s2_bar: int_of(r_map(&s2(), 6)?.neg()),
    })
}

impl Table1 {
    pub fn isometries(&self) -> Result<[Isometry; 3]> {
        let l = StandardLattice::UPlusMn(6).build()?;
        Ok([
            l.isometry(self.t_bar.clone())?,
            l.isometry(self.s1_bar.clone())?,
            l.isometry(self.s2_bar.clone())?,
        ])
    }
}

/// Number of distinct prime factors, with the convention `p(1) = 1`.
pub fn distinct_prime_count(n: u64) -> u32 {
    if n == 1 {
        1
    } else {
        prime_factors(n).len() as u32
    }
}

/// Number of Fourier–Mukai partners of a K3 surface with `NS = ⟨degree⟩`:
/// `2^(p(n)−1)` for `degree = 2n`.
pub fn fm_partner_count(degree: i64) -> Result<u64> {
    if degree <= 0 || degree % 2 != 0 {
        return Err(Error::BadDegree(degree));
    }
    let n = (degree / 2) as u64;
    Ok(1u64 << (distinct_prime_count(n) - 1))
}

/// The index chain behind [`monodromy_index`].
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct IndexReport {
    pub n: i64,
    /// `|O(A)|`, which equals `[O : O*]`.
    pub disc_isometries: u64,
    /// Whether `−id` lies in `O*`.
    pub minus_id_in_kernel: bool,
    /// `[O/±id : O*]`.
    pub projective_index: u64,
    /// Whether `(−id_U) ⊕ id_M` is a kernel element reversing orientation,
    /// so the orientation-preserving parts have the same index.
    pub orientation_witness: bool,
    /// `[O⁺/±id : O⁺*]`.
    pub index: u64,
}

pub fn monodromy_index_report(n: i64) -> Result<IndexReport> {
    if n < 1 {
        return Err(Error::NonPositiveParameter(n));
    }
    let l = StandardLattice::UPlusMn(n).build()?;
    let count = cyclic_disc_isometry_count(n as u64);
    let minus_id = l.identity_isometry().negate();
    let minus_in = in_kernel_star(&l, &minus_id)?;
    let projective = if minus_in { count } else { count / 2 };
    let witness = l.isometry(Matrix::from_fn(3, 3, |i, j| match (i, j) {
        (1, 1) => int(1),
        (i, j) if i == j => int(-1),
        _ => int(0),
    }))?;
    let witness_ok = in_kernel_star(&l, &witness)? && l.orientation_sign_positive(&witness)? == -1;
    // [O : O*] × (index-2 orientation subgroup of O*) ÷ (index-2 subgroup of O)
    let index = if witness_ok { projective * 2 / 2 } else { projective * 2 };
    Ok(IndexReport {
        n,
        disc_isometries: count,
        minus_id_in_kernel: minus_in,
        projective_index: projective,
        orientation_witness: witness_ok,
        index,
    })
}

/// `[O⁺(U⊕M_n)/±id : O⁺(U⊕M_n)*]`, computed from the discriminant form.
pub fn monodromy_index(n: i64) -> Result<u64> {
    if n == 1 {
        return Ok(1);
    }
    Ok(monodromy_index_report(n)?.index)
}

/// One line of the level-6 verification report.
#[derive(Clone, Debug, Serialize)]
pub struct Check {
    pub id: &'static str,
    pub description: &'static str,
    pub passed: bool,
    pub details: Value,
}

#[derive(Clone, Debug, Serialize)]
pub struct Section5Report {
    pub n: i64,
    pub checks: Vec<Check>,
}

impl Section5Report {
    pub fn all_passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn check(&self, id: &str) -> Option<&Check> {
        self.checks.iter().find(|c| c.id == id)
    }
}

fn multiplier(l: &IntLattice, g: &Isometry) -> Result<Option<Int>> {
    Ok(induced_disc_action(l, g)?.cyclic_multiplier())
}

fn mstr(m: &IntMatrix) -> Value {
    serde_json::to_value(m).expect("matrices serialize")
}

/// Exact checks of the degree-12 monodromy: Table-1 signs, discriminant
/// actions, the `(S₂S₁)²` relation, kernel membership of `Γ₀(6)+6`,
/// orientation, and non-extension of `S̄₂` across the mirror glue.
pub fn verify_section5(n: i64) -> Result<Section5Report> {
    if n != 6 {
        return Err(Error::UnsupportedLevel(n));
    }
    let l = StandardLattice::UPlusMn(6).build()?;
    let tab = table1(6)?;
    let [tb, s1b, s2b] = tab.isometries()?;
    let rt = r_map(&translation(), 6)?;
    let rs1 = r_map(&s1(), 6)?;
    let rs2 = r_map(&s2(), 6)?;
    let as_so = |g: &Isometry| SoMatrix::from_isometry(6, g);
    let mut checks = Vec::new();

    let a = as_so(&tb)? == rt && as_so(&s1b)? == rs1.neg() && as_so(&s2b)? == rs2.neg();
    checks.push(Check {
        id: "a",
        description: "T̄ = R(T), S̄₁ = −R(S₁), S̄₂ = −R(S₂)",
        passed: a,
        details: json!({ "T_bar": mstr(&tab.t_bar), "S1_bar": mstr(&tab.s1_bar), "S2_bar": mstr(&tab.s2_bar) }),
    });

    let mt = multiplier(&l, &tb)?;
    let ms1 = multiplier(&l, &s1b)?;
    let ms2 = multiplier(&l, &s2b)?;
    let b = mt == Some(int(1)) && ms1 == Some(int(1)) && ms2 == Some(int(5));
    let show = |m: &Option<Int>| m.as_ref().map(ToString::to_string);
    checks.push(Check {
        id: "b",
        description: "on A = Z/12: T̄ and S̄₁ act trivially, S̄₂ acts by 5",
        passed: b,
        details: json!({ "T_bar": show(&mt), "S1_bar": show(&ms1), "S2_bar": show(&ms2), "modulus": "12" }),
    });

    let s21 = s2().compose(&s1())?;
    let s21_sq = s21.pow(2)?;
    let r_s21 = r_map(&s21, 6)?;
    let anti = r_s21 == rs1.mul(&rs2);
    let lhs = as_so(&s1b)?.mul(&as_so(&s2b)?);
    let lhs_sq = lhs.mul(&lhs);
    let r_sq = r_map(&s21_sq, 6)?;
    let expected = FracLinear::from_i64([5, 2, 12, 5], 1)?;
    let c = anti && lhs_sq == r_sq && s21_sq == expected;
    checks.push(Check {
        id: "c",
        description: "R(S₂S₁) = R(S₁)R(S₂) and (S̄₁S̄₂)² = R((S₂S₁)²) with (S₂S₁)² = (5,2;12,5)",
        passed: c,
        details: json!({
            "S2S1": s21.to_string(),
            "matrix": s21_sq.to_string(),
            "R_of_square": serde_json::to_value(&r_sq.matrix).expect("serializable"),
        }),
    });

    let mut d = true;
    let mut d_details = Vec::new();
    for g in gamma0_plus_generators(6, Gamma0Variant::PlusN)? {
        let rg = r_map(&g, 6)?.to_isometry()?;
        // F identifies ±R(g); one of the two lifts must be symplectic
        let sign = if in_kernel_star(&l, &rg)? {
            Some(1)
        } else if in_kernel_star(&l, &rg.negate())? {
            Some(-1)
        } else {
            None
        };
        d &= sign.is_some();
        d_details.push(json!({ "generator": g.to_string(), "R": mstr(&rg.matrix), "kernel_lift_sign": sign }));
    }
    checks.push(Check {
        id: "d",
        description: "each Γ₀(6)+6 generator has an R-image lift in O(U⊕M₆)*",
        passed: d,
        details: Value::Array(d_details),
    });

    let ot = l.orientation_sign_positive(&tb)?;
    let os1 = l.orientation_sign_positive(&s1b)?;
    let os2 = l.orientation_sign_positive(&s2b)?;
    checks.push(Check {
        id: "e",
        description: "T̄, S̄₁, S̄₂ preserve the orientation of positive 2-planes",
        passed: ot == 1 && os1 == 1 && os2 == 1,
        details: json!({ "T_bar": ot, "S1_bar": os1, "S2_bar": os2 }),
    });

    let gd = construct_mirror_embedding(6)?;
    let id_k = gd.k_lattice().identity_isometry();
    let ext_t = glue_extends(&gd, &tb, &id_k)?.is_some();
    let ext_s1 = glue_extends(&gd, &s1b, &id_k)?.is_some();
    let ext_s2 = glue_extends(&gd, &s2b, &id_k)?.is_some();
    checks.push(Check {
        id: "f",
        description: "(T̄, id) and (S̄₁, id) extend to the Mukai lattice, (S̄₂, id) does not",
        passed: ext_t && ext_s1 && !ext_s2,
        details: json!({ "T_bar": ext_t, "S1_bar": ext_s1, "S2_bar": ext_s2 }),
    });

    Ok(Section5Report { n, checks })
}
