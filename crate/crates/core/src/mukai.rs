//! Mukai vectors over a Néron–Severi lattice and the cohomological actions of
//! the basic autoequivalences: shift, line-bundle tensor, switching functor,
//! spherical twists, the sign flip on `H²`, and reflections in `(-2)`-curves.
//!
//! The Mukai pairing is `⟨(a,b,c),(a',b',c')⟩ = -ac' - ca' + (b,b')` and the
//! graded product is truncated at degree four.

use std::fmt;

use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::arith::{int, rat_from_int, serde_int, serde_int_vec, Int, Rat};
use crate::error::{Error, Result};
use crate::lattice::{hyperbolic_extension, IntLattice};

/// A Mukai vector `(r, d, s)` with `d` in NS coordinates.
#[derive(Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct MukaiVector {
    #[serde(with = "serde_int")]
    pub r: Int,
    #[serde(with = "serde_int_vec")]
    pub d: Vec<Int>,
    #[serde(with = "serde_int")]
    pub s: Int,
}

impl fmt::Debug for MukaiVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let d: Vec<String> = self.d.iter().map(ToString::to_string).collect();
        write!(f, "({}, [{}], {})", self.r, d.join(", "), self.s)
    }
}

impl MukaiVector {
    pub fn new(r: Int, d: Vec<Int>, s: Int) -> Self {
        MukaiVector { r, d, s }
    }

    pub fn from_i64(r: i64, d: &[i64], s: i64) -> Self {
        MukaiVector::new(int(r), d.iter().map(|&x| int(x)).collect(), int(s))
    }

    pub fn neg(&self) -> Self {
        MukaiVector::new(-&self.r, self.d.iter().map(|x| -x).collect(), -&self.s)
    }

    fn add_scaled(&self, k: &Int, w: &MukaiVector) -> Self {
        MukaiVector::new(
            &self.r + k * &w.r,
            self.d.iter().zip(&w.d).map(|(a, b)| a + k * b).collect(),
            &self.s + k * &w.s,
        )
    }

    pub fn is_primitive(&self) -> bool {
        let g = self.d.iter().fold(self.r.gcd(&self.s), |acc, x| acc.gcd(x));
        g.is_one()
    }
}

/// One step of an autoequivalence word, recorded at the level of its action
/// on the Mukai lattice.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "action", rename_all = "snake_case")]
pub enum Action {
    /// The shift `[1]`, acting as `-id`.
    Shift,
    /// Tensor with the line bundle of first Chern class `b`.
    Tensor {
        #[serde(with = "serde_int_vec")]
        b: Vec<Int>,
    },
    /// The switching functor with kernel the ideal sheaf of the diagonal.
    Switch,
    /// Spherical twist with Mukai vector `w`, `⟨w,w⟩ = -2`.
    Twist { w: MukaiVector },
    /// `(a, b, c) ↦ (a, -b, c)`.
    Iota2,
    /// Reflection in a `(-2)`-class `c` of NS.
    ReflectCurve {
        #[serde(with = "serde_int_vec")]
        c: Vec<Int>,
    },
}

/// A Néron–Severi lattice together with a chosen ample class.
#[derive(Clone, Debug)]
pub struct NsContext {
    ns: IntLattice,
    ample: Vec<Int>,
}

impl NsContext {
    pub fn new(ns: IntLattice, ample: Vec<Int>) -> Result<Self> {
        if ample.len() != ns.rank() {
            return Err(Error::DimensionMismatch {
                expected: ns.rank(),
                got: ample.len(),
            });
        }
        if !ns.bilinear(&ample, &ample)?.is_positive() {
            return Err(Error::Precondition("ample class must have positive square".into()));
        }
        if !ns.is_even() {
            return Err(Error::Precondition("Néron–Severi lattice must be even".into()));
        }
        Ok(NsContext { ns, ample })
    }

    /// Picard rank one, `NS = Z h` with `(h,h) = 2n`.
    pub fn rank_one(n: i64) -> Result<Self> {
        let ns = crate::lattice::StandardLattice::TwoN(n).build()?;
        NsContext::new(ns, vec![int(1)])
    }

    pub fn ns(&self) -> &IntLattice {
        &self.ns
    }

    pub fn ample(&self) -> &[Int] {
        &self.ample
    }

    /// `H⁰ ⊕ NS ⊕ H⁴` as a lattice in the basis `(r, d..., s)`.
    pub fn mukai_lattice(&self) -> IntLattice {
        hyperbolic_extension(&self.ns)
    }

    fn check(&self, v: &MukaiVector) -> Result<()> {
        if v.d.len() == self.ns.rank() {
            Ok(())
        } else {
            Err(Error::ContextMismatch)
        }
    }

    fn ns_pair(&self, a: &[Int], b: &[Int]) -> Int {
        self.ns.bilinear(a, b).expect("lengths checked by caller")
    }

    pub fn mukai_pairing(&self, v: &MukaiVector, w: &MukaiVector) -> Result<Int> {
        self.check(v)?;
        self.check(w)?;
        Ok(-(&v.r * &w.s) - &v.s * &w.r + self.ns_pair(&v.d, &w.d))
    }

    /// Graded product `(r,d,s)(r',d',s') = (rr', rd' + r'd, rs' + r's + (d,d'))`.
    pub fn ring_mul(&self, v: &MukaiVector, w: &MukaiVector) -> Result<MukaiVector> {
        self.check(v)?;
        self.check(w)?;
        Ok(MukaiVector::new(
            &v.r * &w.r,
            v.d.iter().zip(&w.d).map(|(a, b)| &v.r * b + &w.r * a).collect(),
            &v.r * &w.s + &w.r * &v.s + self.ns_pair(&v.d, &w.d),
        ))
    }

    /// Chern character `(1, b, (b,b)/2)` of the line bundle with class `b`.
    pub fn line_bundle(&self, b: &[Int]) -> Result<MukaiVector> {
        if b.len() != self.ns.rank() {
            return Err(Error::ContextMismatch);
        }
        let sq = self.ns_pair(b, b);
        if !sq.is_even() {
            return Err(Error::OddSquare(sq.to_string()));
        }
        Ok(MukaiVector::new(int(1), b.to_vec(), sq / 2))
    }

    /// Well-formedness of an action in this context.
    pub fn validate(&self, a: &Action) -> Result<()> {
        match a {
            Action::Shift | Action::Switch | Action::Iota2 => Ok(()),
            Action::Tensor { b } => self.line_bundle(b).map(|_| ()),
            Action::Twist { w } => {
                let sq = self.mukai_pairing(w, w)?;
                if sq == int(-2) {
                    Ok(())
                } else {
                    Err(Error::NotSpherical(sq.to_string()))
                }
            }
            Action::ReflectCurve { c } => {
                if c.len() != self.ns.rank() {
                    return Err(Error::ContextMismatch);
                }
                let sq = self.ns_pair(c, c);
                if sq == int(-2) {
                    Ok(())
                } else {
                    Err(Error::NotMinusTwoCurve(sq.to_string()))
                }
            }
        }
    }

    pub fn apply_action(&self, a: &Action, x: &MukaiVector) -> Result<MukaiVector> {
        self.check(x)?;
        self.validate(a)?;
        match a {
            Action::Shift => Ok(x.neg()),
            Action::Tensor { b } => self.ring_mul(&self.line_bundle(b)?, x),
            Action::Switch => Ok(MukaiVector::new(
                x.s.clone(),
                x.d.iter().map(|v| -v).collect(),
                x.r.clone(),
            )),
            Action::Twist { w } => {
                let k = self.mukai_pairing(w, x)?;
                Ok(x.add_scaled(&k, w))
            }
            Action::Iota2 => Ok(MukaiVector::new(
                x.r.clone(),
                x.d.iter().map(|v| -v).collect(),
                x.s.clone(),
            )),
            Action::ReflectCurve { c } => self.reflect_curve(c, x),
        }
    }

    /// Applies a word left to right: the first action acts first.
    pub fn apply_word(&self, word: &[Action], x: &MukaiVector) -> Result<MukaiVector> {
        word.iter().try_fold(x.clone(), |acc, a| self.apply_action(a, &acc))
    }

    /// `x + ⟨x, C⟩ C` with `C = (0, c, 0)`.
    pub fn reflect_curve(&self, c: &[Int], x: &MukaiVector) -> Result<MukaiVector> {
        self.check(x)?;
        if c.len() != self.ns.rank() {
            return Err(Error::ContextMismatch);
        }
        let sq = self.ns_pair(c, c);
        if sq != int(-2) {
            return Err(Error::NotMinusTwoCurve(sq.to_string()));
        }
        let curve = MukaiVector::new(int(0), c.to_vec(), int(0));
        let k = self.mukai_pairing(x, &curve)?;
        Ok(x.add_scaled(&k, &curve))
    }

    /// Rank-one class `m·h` read back as the integer `m`.
    fn ample_multiple(&self, d: &[Int]) -> Option<Int> {
        let h = &self.ample;
        let (i, hi) = h.iter().enumerate().find(|(_, x)| !x.is_zero())?;
        let (m, rem) = d[i].div_rem(hi);
        if !rem.is_zero() {
            return None;
        }
        d.iter().zip(h).all(|(a, b)| a == &(&m * b)).then_some(m)
    }
}

/// Output of [`normalize_mukai_vector`].
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Normalization {
    pub word: Vec<Action>,
    pub v: MukaiVector,
    pub u: MukaiVector,
}

const SEARCH_DEPTH: usize = 6;
const TENSOR_RANGE: i64 = 3;

/// Moves a primitive isotropic `v` (with companion `u`, `⟨u,v⟩ = -1`) by
/// autoequivalence actions to `v' = (r', m'h, s')` with `r' > 1`,
/// `gcd(r', s') = 1` and `m' > 0`.
///
/// Step one searches words over the alphabet `Switch, Shift, Tensor(±kh)`
/// in that order, shortest first, until the rank exceeds one. Step two
/// tensors by `m·b` (b the NS part of `u`) for the least `m ≥ 0` giving
/// coprimality. Step three tensors by `r·k·h` for the least `k ≥ 1` making
/// the NS part a positive multiple of `h`.
pub fn normalize_mukai_vector(ctx: &NsContext, v: &MukaiVector, u: &MukaiVector) -> Result<Normalization> {
    if ctx.ns.rank() != 1 {
        return Err(Error::Precondition("normalization is implemented for Picard rank one".into()));
    }
    if ctx.mukai_pairing(v, v)? != Int::zero() {
        return Err(Error::Precondition(format!("⟨v,v⟩ ≠ 0 for v = {v:?}")));
    }
    if !v.is_primitive() {
        return Err(Error::Precondition(format!("v = {v:?} is not primitive")));
    }
    if ctx.mukai_pairing(u, v)? != int(-1) {
        return Err(Error::Precondition(format!("⟨u,v⟩ ≠ -1 for u = {u:?}")));
    }
    let h = ctx.ample.clone();
    let scaled = |k: i64| -> Vec<Int> { h.iter().map(|x| x * int(k)).collect() };

    // step one: rank above one
    let mut alphabet = vec![Action::Switch, Action::Shift];
    for k in 1..=TENSOR_RANGE {
        alphabet.push(Action::Tensor { b: scaled(k) });
        alphabet.push(Action::Tensor { b: scaled(-k) });
    }
    let mut word = if v.r > Int::one() {
        Vec::new()
    } else {
        search_rank_word(ctx, v, &alphabet)?
            .ok_or_else(|| Error::NoNormalization(format!("no word of length ≤ {SEARCH_DEPTH} raises the rank of {v:?}")))?
    };
    let mut cur_v = ctx.apply_word(&word, v)?;
    let mut cur_u = ctx.apply_word(&word, u)?;

    // step two: gcd(r, s) = 1
    let r = cur_v.r.clone();
    let bl = ctx.ns_pair(&cur_u.d, &cur_v.d);
    let m = (0..)
        .map(Int::from)
        .take_while(|m: &Int| m <= &r)
        .find(|m| r.gcd(&(&cur_v.s + m * &bl)).is_one())
        .ok_or_else(|| Error::NoNormalization(format!("no coprime shift for {cur_v:?}")))?;
    if !m.is_zero() {
        let step = Action::Tensor {
            b: cur_u.d.iter().map(|x| x * &m).collect(),
        };
        cur_v = ctx.apply_action(&step, &cur_v)?;
        cur_u = ctx.apply_action(&step, &cur_u)?;
        word.push(step);
    }

    // step three: ample NS part
    let mult = ctx
        .ample_multiple(&cur_v.d)
        .ok_or_else(|| Error::NoNormalization("NS part is not a multiple of h".into()))?;
    if !mult.is_positive() {
        let r2 = &cur_v.r * &cur_v.r;
        // least k ≥ 1 with mult + r² k > 0
        let k = ((-&mult) / &r2) + Int::one();
        let step = Action::Tensor {
            b: h.iter().map(|x| x * &cur_v.r * &k).collect(),
        };
        cur_v = ctx.apply_action(&step, &cur_v)?;
        cur_u = ctx.apply_action(&step, &cur_u)?;
        word.push(step);
    }
    Ok(Normalization {
        word,
        v: cur_v,
        u: cur_u,
    })
}

fn search_rank_word(ctx: &NsContext, v: &MukaiVector, alphabet: &[Action]) -> Result<Option<Vec<Action>>> {
    // breadth-first in alphabet order; the first word reaching r > 1 wins
    let mut layer: Vec<(Vec<usize>, MukaiVector)> = vec![(Vec::new(), v.clone())];
    for _ in 0..SEARCH_DEPTH {
        let mut next = Vec::with_capacity(layer.len() * alphabet.len());
        for (w, x) in &layer {
            for (i, a) in alphabet.iter().enumerate() {
                let y = ctx.apply_action(a, x)?;
                let mut w2 = w.clone();
                w2.push(i);
                if y.r > Int::one() {
                    return Ok(Some(w2.into_iter().map(|i| alphabet[i].clone()).collect()));
                }
                next.push((w2, y));
            }
        }
        layer = next;
    }
    Ok(None)
}

/// `½⟨x,x⟩ f̌ + x + ě` in the basis `(ě, x-coordinates, f̌)` of `U ⊕ M̌`.
pub fn mirror_period(mcheck: &IntLattice, x: &[Rat]) -> Result<Vec<Rat>> {
    let half = mcheck.bilinear_rat(x, x)? / rat_from_int(&int(2));
    let mut w = Vec::with_capacity(x.len() + 2);
    w.push(Rat::one());
    w.extend_from_slice(x);
    w.push(half);
    Ok(w)
}
