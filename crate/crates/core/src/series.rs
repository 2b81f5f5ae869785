//! Truncated Laurent series with exact rational coefficients.
//!
//! A [`RationalSeries`] stores `Σ coeffs[i]·x^(start+i)` together with its
//! absolute precision: every coefficient of `x^k` with `k < prec` is exact,
//! everything from `x^prec` on is unknown. Exact polynomials carry no bound.
//! Each operation propagates the precision it can guarantee, so results
//! never silently include garbage coefficients.

use std::fmt;

use num_traits::{One, Zero};

use crate::arith::{int, rat_from_int, rat_to_string, Int, Rat};
use crate::error::{Error, Result};

#[derive(Clone, PartialEq, Eq)]
pub struct RationalSeries {
    start: i64,
    coeffs: Vec<Rat>,
    prec: Option<i64>,
}

impl fmt::Debug for RationalSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let terms: Vec<String> = self
            .coeffs
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(i, c)| format!("{}·x^{}", rat_to_string(c), self.start + i as i64))
            .collect();
        let tail = match self.prec {
            Some(p) => format!(" + O(x^{p})"),
            None => String::new(),
        };
        write!(f, "{}{}", if terms.is_empty() { "0".into() } else { terms.join(" + ") }, tail)
    }
}

fn min_prec(a: Option<i64>, b: Option<i64>) -> Option<i64> {
    match (a, b) {
        (Some(x), Some(y)) => Some(x.min(y)),
        (x, None) => x,
        (None, y) => y,
    }
}

fn shift_prec(p: Option<i64>, by: i64) -> Option<i64> {
    p.map(|p| p + by)
}

impl RationalSeries {
    /// `Σ coeffs[i] x^(start+i) + O(x^prec)`; coefficients at or beyond
    /// `prec` are discarded.
    pub fn new(start: i64, coeffs: Vec<Rat>, prec: Option<i64>) -> Self {
        let mut s = RationalSeries { start, coeffs, prec };
        s.normalize();
        s
    }

    /// A power series `Σ_{i<prec} coeffs[i] x^i + O(x^prec)` with `prec = coeffs.len()`.
    pub fn power_series(coeffs: Vec<Rat>) -> Self {
        let p = coeffs.len() as i64;
        RationalSeries::new(0, coeffs, Some(p))
    }

    /// An exact polynomial `Σ coeffs[i] x^i`.
    pub fn polynomial(coeffs: Vec<Rat>) -> Self {
        RationalSeries::new(0, coeffs, None)
    }

    pub fn polynomial_i64(coeffs: &[i64]) -> Self {
        RationalSeries::polynomial(coeffs.iter().map(|&c| rat_from_int(&int(c))).collect())
    }

    /// The exact monomial `c·x^k`.
    pub fn monomial(c: Rat, k: i64) -> Self {
        RationalSeries::new(k, vec![c], None)
    }

    pub fn zero() -> Self {
        RationalSeries::new(0, Vec::new(), None)
    }

    pub fn one() -> Self {
        RationalSeries::monomial(Rat::one(), 0)
    }

    pub fn x() -> Self {
        RationalSeries::monomial(Rat::one(), 1)
    }

    fn normalize(&mut self) {
        if let Some(p) = self.prec {
            let keep = (p - self.start).max(0) as usize;
            self.coeffs.truncate(keep);
        }
        let lead = self.coeffs.iter().take_while(|c| c.is_zero()).count();
        if lead == self.coeffs.len() {
            self.coeffs.clear();
            self.start = match self.prec {
                Some(p) => p.min(0),
                None => 0,
            };
            return;
        }
        if lead > 0 {
            self.coeffs.drain(..lead);
            self.start += lead as i64;
        }
        while self.coeffs.last().is_some_and(Zero::is_zero) {
            self.coeffs.pop();
        }
    }

    /// Absolute precision (`None` for exact polynomials).
    pub fn prec(&self) -> Option<i64> {
        self.prec
    }

    /// Exponent of the first nonzero coefficient.
    pub fn valuation(&self) -> Option<i64> {
        (!self.coeffs.is_empty()).then_some(self.start)
    }

    /// Coefficient of `x^k`, `None` if it lies beyond the known precision.
    pub fn coeff(&self, k: i64) -> Option<Rat> {
        if self.prec.is_some_and(|p| k >= p) {
            return None;
        }
        let i = k - self.start;
        if i < 0 || i as usize >= self.coeffs.len() {
            Some(Rat::zero())
        } else {
            Some(self.coeffs[i as usize].clone())
        }
    }

    /// Known coefficients `x^from .. x^to` inclusive; fails past the precision.
    pub fn coeffs_range(&self, from: i64, to: i64) -> Result<Vec<Rat>> {
        (from..=to)
            .map(|k| {
                self.coeff(k)
                    .ok_or_else(|| Error::Series(format!("coefficient of x^{k} beyond precision {:?}", self.prec)))
            })
            .collect()
    }

    /// Forgets everything from `x^p` on.
    pub fn truncate(&self, p: i64) -> Self {
        RationalSeries::new(self.start, self.coeffs.clone(), min_prec(self.prec, Some(p)))
    }

    pub fn is_zero_through_prec(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn add(&self, other: &Self) -> Self {
        let start = self.start.min(other.start);
        let end = (self.start + self.coeffs.len() as i64).max(other.start + other.coeffs.len() as i64);
        let coeffs = (start..end)
            .map(|k| {
                let a = self.raw(k);
                let b = other.raw(k);
                a + b
            })
            .collect();
        RationalSeries::new(start, coeffs, min_prec(self.prec, other.prec))
    }

    fn raw(&self, k: i64) -> Rat {
        let i = k - self.start;
        if i < 0 || i as usize >= self.coeffs.len() {
            Rat::zero()
        } else {
            self.coeffs[i as usize].clone()
        }
    }

    pub fn neg(&self) -> Self {
        RationalSeries::new(self.start, self.coeffs.iter().map(|c| -c).collect(), self.prec)
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn scale(&self, c: &Rat) -> Self {
        if c.is_zero() {
            return RationalSeries::new(0, Vec::new(), self.prec);
        }
        RationalSeries::new(self.start, self.coeffs.iter().map(|a| a * c).collect(), self.prec)
    }

    /// Multiplication by `x^k`.
    pub fn shift(&self, k: i64) -> Self {
        RationalSeries::new(self.start + k, self.coeffs.clone(), shift_prec(self.prec, k))
    }

    fn val_or_prec(&self) -> i64 {
        self.valuation().or(self.prec).unwrap_or(0)
    }

    pub fn mul(&self, other: &Self) -> Self {
        let prec = min_prec(
            shift_prec(self.prec, other.val_or_prec()),
            shift_prec(other.prec, self.val_or_prec()),
        );
        if self.coeffs.is_empty() || other.coeffs.is_empty() {
            return RationalSeries::new(0, Vec::new(), prec);
        }
        let start = self.start + other.start;
        let len = match prec {
            Some(p) => ((p - start).max(0) as usize).min(self.coeffs.len() + other.coeffs.len() - 1),
            None => self.coeffs.len() + other.coeffs.len() - 1,
        };
        let mut out = vec![Rat::zero(); len];
        for (i, a) in self.coeffs.iter().enumerate() {
            if i >= len || a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate().take(len - i) {
                out[i + j] += a * b;
            }
        }
        RationalSeries::new(start, out, prec)
    }

    pub fn pow(&self, e: i64) -> Result<Self> {
        if e < 0 {
            return self.inverse()?.pow(-e);
        }
        let mut acc = RationalSeries::one();
        let mut base = self.clone();
        let mut e = e as u64;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base);
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(&base);
            }
        }
        Ok(acc)
    }

    /// Multiplicative inverse of a series with a known nonzero leading term;
    /// an input known to relative precision `m` gives an inverse to relative
    /// precision `m`.
    pub fn inverse(&self) -> Result<Self> {
        let v = self
            .valuation()
            .ok_or_else(|| Error::Series("inverse of a series with no known nonzero term".into()))?;
        let prec = self.prec.map(|p| p - 2 * v);
        let len = match self.prec {
            Some(p) => (p - v) as usize,
            None => {
                if self.coeffs.len() == 1 {
                    return Ok(RationalSeries::monomial(Rat::one() / &self.coeffs[0], -v));
                }
                return Err(Error::Series("inverse of an exact non-monomial needs an explicit truncation".into()));
            }
        };
        Ok(RationalSeries::new(-v, unit_inverse(&self.coeffs, len), prec))
    }

    /// Inverse of an exact polynomial truncated at absolute precision `p`.
    pub fn inverse_to(&self, p: i64) -> Result<Self> {
        let v = self
            .valuation()
            .ok_or_else(|| Error::Series("inverse of zero".into()))?;
        // relative precision needed: p + v
        self.truncate(p + 2 * v).inverse()
    }

    pub fn div(&self, other: &Self) -> Result<Self> {
        Ok(self.mul(&other.inverse()?))
    }

    /// `d/dx`.
    pub fn derivative(&self) -> Self {
        let coeffs = self
            .coeffs
            .iter()
            .enumerate()
            .map(|(i, c)| c * rat_from_int(&int(self.start + i as i64)))
            .collect();
        RationalSeries::new(self.start - 1, coeffs, shift_prec(self.prec, -1))
    }

    /// `θ = x·d/dx`.
    pub fn theta(&self) -> Self {
        let coeffs = self
            .coeffs
            .iter()
            .enumerate()
            .map(|(i, c)| c * rat_from_int(&int(self.start + i as i64)))
            .collect();
        RationalSeries::new(self.start, coeffs, self.prec)
    }

    /// `exp(f)` for `f` with vanishing constant term.
    pub fn exp(&self) -> Result<Self> {
        if self.valuation().is_some_and(|v| v < 1) {
            return Err(Error::Series("exp needs a series without constant or polar part".into()));
        }
        let p = self
            .prec
            .ok_or_else(|| Error::Series("exp of an exact polynomial needs a truncation".into()))?;
        if p <= 0 {
            return Ok(RationalSeries::new(0, Vec::new(), Some(p)));
        }
        let n = p as usize;
        let f: Vec<Rat> = (0..n as i64).map(|k| self.raw(k)).collect();
        let mut g = vec![Rat::zero(); n];
        g[0] = Rat::one();
        for m in 1..n {
            let mut acc = Rat::zero();
            for k in 1..=m {
                if !f[k].is_zero() {
                    acc += rat_from_int(&int(k as i64)) * &f[k] * &g[m - k];
                }
            }
            g[m] = acc / rat_from_int(&int(m as i64));
        }
        Ok(RationalSeries::new(0, g, Some(p)))
    }

    /// `self(g(x))` for `g` of positive valuation, written as
    /// `g^v · Σ cᵢ gⁱ` with `v` the valuation of `self`.
    pub fn compose(&self, g: &Self) -> Result<Self> {
        let vg = g
            .valuation()
            .filter(|&v| v >= 1)
            .ok_or_else(|| Error::Series("inner series must have positive valuation".into()))?;
        let outer_cap = self.prec.map(|p| p * vg);
        if self.coeffs.is_empty() {
            return Ok(RationalSeries::new(0, Vec::new(), outer_cap));
        }
        let vf = self.start;
        let inner_cap = self.prec.map(|p| (p - vf) * vg);
        let cut = |s: RationalSeries| match inner_cap {
            Some(c) => s.truncate(c),
            None => s,
        };
        let mut inner = RationalSeries::zero();
        let mut gp = RationalSeries::one();
        for (i, c) in self.coeffs.iter().enumerate() {
            if inner_cap.is_some_and(|cap| i as i64 * vg >= cap) {
                break;
            }
            if !c.is_zero() {
                inner = cut(inner.add(&gp.scale(c)));
            }
            gp = cut(gp.mul(g));
        }
        let inner = cut(inner);
        let out = g.pow(vf)?.mul(&inner);
        Ok(match outer_cap {
            Some(c) => out.truncate(c),
            None => out,
        })
    }

    /// Compositional inverse of `f = c₁x + …` (`c₁ ≠ 0`) by Lagrange inversion.
    pub fn reversion(&self) -> Result<Self> {
        if self.valuation() != Some(1) {
            return Err(Error::Series("reversion needs valuation exactly one".into()));
        }
        let p = self
            .prec
            .ok_or_else(|| Error::Series("reversion of an exact polynomial needs a truncation".into()))?;
        // φ = x/f, then [q^n] g = (1/n)[x^(n−1)] φ^n
        let phi = self.shift(-1).inverse()?;
        let mut coeffs = vec![Rat::zero(); p.max(1) as usize];
        let mut phin = RationalSeries::one();
        for n in 1..p {
            phin = phin.mul(&phi);
            let c = phin
                .coeff(n - 1)
                .ok_or_else(|| Error::Series("precision exhausted during reversion".into()))?;
            coeffs[n as usize] = c / rat_from_int(&int(n));
        }
        Ok(RationalSeries::new(0, coeffs, Some(p)))
    }

    /// Evaluates the known part at a float point (for numerics only).
    pub fn eval_f64(&self, x: f64) -> f64 {
        use num_traits::ToPrimitive;
        self.coeffs
            .iter()
            .enumerate()
            .map(|(i, c)| c.to_f64().unwrap_or(f64::NAN) * x.powi((self.start + i as i64) as i32))
            .sum()
    }

    /// Coefficients `0..=order` rendered as `"p/q"` strings.
    pub fn to_strings(&self, order: i64) -> Result<Vec<String>> {
        Ok(self.coeffs_range(0, order)?.iter().map(rat_to_string).collect())
    }
}

/// Inverse of the unit power series `c[0] + c[1]x + …` to `len` terms.
fn unit_inverse(c: &[Rat], len: usize) -> Vec<Rat> {
    let mut out = vec![Rat::zero(); len];
    if len == 0 {
        return out;
    }
    let inv0 = Rat::one() / &c[0];
    out[0] = inv0.clone();
    for n in 1..len {
        let mut acc = Rat::zero();
        for k in 1..=n.min(c.len().saturating_sub(1)) {
            acc += &c[k] * &out[n - k];
        }
        out[n] = -acc * &inv0;
    }
    out
}

/// `Σ_j f_j(x)·(log x)^j`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LogSeries {
    pub parts: Vec<RationalSeries>,
}

impl LogSeries {
    pub fn new(parts: Vec<RationalSeries>) -> Self {
        LogSeries { parts }
    }

    pub fn from_series(f: RationalSeries) -> Self {
        LogSeries { parts: vec![f] }
    }

    pub fn log_degree(&self) -> usize {
        self.parts.len().saturating_sub(1)
    }

    /// `θ(f·L^j) = (θf)·L^j + j·f·L^(j−1)`.
    pub fn theta(&self) -> Self {
        let parts = (0..self.parts.len())
            .map(|j| {
                let mut p = self.parts[j].theta();
                if let Some(next) = self.parts.get(j + 1) {
                    p = p.add(&next.scale(&rat_from_int(&int(j as i64 + 1))));
                }
                p
            })
            .collect();
        LogSeries { parts }
    }

    pub fn add(&self, other: &Self) -> Self {
        let n = self.parts.len().max(other.parts.len());
        let zero = RationalSeries::zero();
        let parts = (0..n)
            .map(|j| self.parts.get(j).unwrap_or(&zero).add(other.parts.get(j).unwrap_or(&zero)))
            .collect();
        LogSeries { parts }
    }

    pub fn scale(&self, c: &Rat) -> Self {
        LogSeries {
            parts: self.parts.iter().map(|p| p.scale(c)).collect(),
        }
    }

    pub fn shift(&self, k: i64) -> Self {
        LogSeries {
            parts: self.parts.iter().map(|p| p.shift(k)).collect(),
        }
    }

    pub fn is_zero_through_prec(&self) -> bool {
        self.parts.iter().all(RationalSeries::is_zero_through_prec)
    }

    /// Smallest known precision among the parts.
    pub fn prec(&self) -> Option<i64> {
        self.parts.iter().map(RationalSeries::prec).fold(None, min_prec)
    }

    /// Evaluates at real `x > 0` with the principal real logarithm.
    pub fn eval_f64(&self, x: f64) -> f64 {
        let l = x.ln();
        self.parts
            .iter()
            .enumerate()
            .map(|(j, p)| p.eval_f64(x) * l.powi(j as i32))
            .sum()
    }
}

/// `C(n, k)` as an exact integer.
pub fn binomial(n: u64, k: u64) -> Int {
    if k > n {
        return Int::zero();
    }
    let k = k.min(n - k);
    let mut acc = Int::one();
    for i in 0..k {
        acc = acc * Int::from(n - i) / Int::from(i + 1);
    }
    acc
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::rat;

    fn ps(c: &[i64]) -> RationalSeries {
        RationalSeries::power_series(c.iter().map(|&v| rat(v, 1)).collect())
    }

    #[test]
    fn multiplication_and_precision() {
        let a = ps(&[1, 1, 0, 0]); // 1 + x + O(x^4)
        let b = a.mul(&a);
        assert_eq!(b.coeffs_range(0, 3).unwrap(), vec![rat(1, 1), rat(2, 1), rat(1, 1), rat(0, 1)]);
        assert_eq!(b.prec(), Some(4));
        let c = a.shift(-2).mul(&a.shift(1));
        assert_eq!(c.prec(), Some(3)); // min(2+1, 5-1)
    }

    #[test]
    fn geometric_inverse() {
        let f = RationalSeries::polynomial_i64(&[1, -1]).inverse_to(6).unwrap();
        assert_eq!(f.coeffs_range(0, 5).unwrap(), vec![rat(1, 1); 6]);
        assert_eq!(f.prec(), Some(6));
        // 1/(x + x²) = x⁻¹ − 1 + x − …
        let g = RationalSeries::polynomial_i64(&[0, 1, 1]).inverse_to(4).unwrap();
        assert_eq!(g.valuation(), Some(-1));
        assert_eq!(g.coeffs_range(-1, 3).unwrap(), vec![rat(1, 1), rat(-1, 1), rat(1, 1), rat(-1, 1), rat(1, 1)]);
    }

    #[test]
    fn exp_of_x() {
        let e = ps(&[0, 1, 0, 0, 0, 0]).exp().unwrap();
        let want: Vec<Rat> = [1, 1, 2, 6, 24, 120].iter().map(|&f| rat(1, f)).collect();
        assert_eq!(e.coeffs_range(0, 5).unwrap(), want);
        assert!(ps(&[1, 1]).exp().is_err());
    }

    #[test]
    fn derivative_and_theta() {
        let f = RationalSeries::polynomial_i64(&[5, 3, 0, 2]);
        assert_eq!(f.derivative(), RationalSeries::polynomial_i64(&[3, 0, 6]));
        assert_eq!(f.theta(), RationalSeries::polynomial_i64(&[0, 3, 0, 6]));
        let t3 = RationalSeries::monomial(rat(1, 1), 2).theta().theta().theta();
        assert_eq!(t3, RationalSeries::monomial(rat(8, 1), 2));
    }

    #[test]
    fn compose_and_reversion() {
        // f = x + x², g = x/(1−x) truncated
        let f = RationalSeries::polynomial_i64(&[0, 1, 1]).truncate(8);
        let r = f.reversion().unwrap();
        let back = f.compose(&r).unwrap();
        assert_eq!(back.coeffs_range(0, 7).unwrap(), ps(&[0, 1, 0, 0, 0, 0, 0, 0]).coeffs_range(0, 7).unwrap());
        // Catalan numbers with alternating sign: x = q − q² + 2q³ − 5q⁴ + 14q⁵
        assert_eq!(
            r.coeffs_range(0, 5).unwrap(),
            [0, 1, -1, 2, -5, 14].iter().map(|&v| rat(v, 1)).collect::<Vec<_>>()
        );
        // Laurent outer series: (1/x) ∘ (x + x²) = 1/x − 1 + x − …
        let inv = RationalSeries::monomial(rat(1, 1), -1);
        let h = inv.compose(&f).unwrap();
        assert_eq!(h.coeffs_range(-1, 2).unwrap(), vec![rat(1, 1), rat(-1, 1), rat(1, 1), rat(-1, 1)]);
    }

    #[test]
    fn log_theta() {
        // θ(x·L) = x·L + x
        let y = LogSeries::new(vec![RationalSeries::zero(), RationalSeries::x()]);
        let t = y.theta();
        assert_eq!(t.parts[0], RationalSeries::x());
        assert_eq!(t.parts[1], RationalSeries::x());
        // θ(L²) = 2L, θ²(L²) = 2
        let l2 = LogSeries::new(vec![RationalSeries::zero(), RationalSeries::zero(), RationalSeries::one()]);
        let t1 = l2.theta();
        assert_eq!(t1.parts[1], RationalSeries::polynomial_i64(&[2]));
        assert_eq!(t1.theta().parts[0], RationalSeries::polynomial_i64(&[2]));
    }

    #[test]
    fn binomials() {
        assert_eq!(binomial(10, 3), int(120));
        assert_eq!(binomial(4, 5), int(0));
        assert_eq!(binomial(60, 30).to_string(), "118264581564861424");
    }
}
