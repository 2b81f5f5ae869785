//! The Picard–Fuchs operator of the degree-12 mirror family,
//! `P = θ³ + 36x²(θ+1)(2θ+1)(2θ+3) − 2x(2θ+1)(10θ²+10θ+3)`,
//! its Frobenius basis at the point of maximal unipotent monodromy, the
//! mirror map, and exact Schwarzian checks.

use num_traits::{One, Zero};
use serde::Serialize;

use crate::arith::{int, rat, rat_from_int, rat_to_string, Int, Rat};
use crate::error::{Error, Result};
use crate::series::{binomial, LogSeries, RationalSeries};

/// A polynomial in `θ` with rational coefficients, lowest degree first.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ThetaPoly(pub Vec<Rat>);

impl ThetaPoly {
    pub fn from_i64(c: &[i64]) -> Self {
        ThetaPoly(c.iter().map(|&v| rat(v, 1)).collect())
    }

    pub fn degree(&self) -> usize {
        self.0.len().saturating_sub(1)
    }

    pub fn eval(&self, t: &Rat) -> Rat {
        self.0.iter().rev().fold(Rat::zero(), |acc, c| acc * t + c)
    }

    pub fn derivative(&self) -> Self {
        ThetaPoly(
            self.0
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, c)| c * rat(i as i64, 1))
                .collect(),
        )
    }

    /// `i`-th derivative.
    pub fn derivative_n(&self, i: usize) -> Self {
        (0..i).fold(self.clone(), |p, _| p.derivative())
    }

    pub fn mul(&self, other: &Self) -> Self {
        if self.0.is_empty() || other.0.is_empty() {
            return ThetaPoly(Vec::new());
        }
        let mut out = vec![Rat::zero(); self.0.len() + other.0.len() - 1];
        for (i, a) in self.0.iter().enumerate() {
            for (j, b) in other.0.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        ThetaPoly(out)
    }

    pub fn scale(&self, c: i64) -> Self {
        ThetaPoly(self.0.iter().map(|a| a * rat(c, 1)).collect())
    }

    /// `p(θ)` applied to a log series.
    pub fn apply(&self, y: &LogSeries) -> LogSeries {
        let mut acc = LogSeries::new(Vec::new());
        let mut power = y.clone();
        for (d, c) in self.0.iter().enumerate() {
            if d > 0 {
                power = power.theta();
            }
            if !c.is_zero() {
                acc = acc.add(&power.scale(c));
            }
        }
        acc
    }
}

/// `Σ_k x^k · p_k(θ)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ThetaOperator {
    pub terms: Vec<ThetaPoly>,
}

impl ThetaOperator {
    /// Coefficient of `x^N` in `P(Σ a_m x^m)`: `Σ_k p_k(N−k) a_{N−k}`.
    fn coefficient_at(&self, deriv: usize, a: &[Rat], n: usize) -> Rat {
        let mut acc = Rat::zero();
        for (k, p) in self.terms.iter().enumerate() {
            if k > n {
                break;
            }
            let pk = p.derivative_n(deriv);
            acc += pk.eval(&rat((n - k) as i64, 1)) * &a[n - k];
        }
        acc
    }

    /// Degrees in `θ` and `x` as `(θ-order, x-degree)`.
    pub fn shape(&self) -> (usize, usize) {
        let ord = self.terms.iter().map(ThetaPoly::degree).max().unwrap_or(0);
        (ord, self.terms.len().saturating_sub(1))
    }
}

/// The Picard–Fuchs operator `θ³ − 2x(2θ+1)(10θ²+10θ+3) + 36x²(θ+1)(2θ+1)(2θ+3)` in the form `Σ x^k p_k(θ)`.
pub fn pf_operator() -> ThetaOperator {
    let theta = |a: i64, b: i64| ThetaPoly::from_i64(&[b, a]); // aθ + b
    let p0 = ThetaPoly::from_i64(&[0, 0, 0, 1]);
    let p1 = theta(2, 1).mul(&ThetaPoly::from_i64(&[3, 10, 10])).scale(-2);
    let p2 = theta(1, 1).mul(&theta(2, 1)).mul(&theta(2, 3)).scale(36);
    ThetaOperator { terms: vec![p0, p1, p2] }
}

/// `P(y)` on a log series, using only the `θ`-action on logarithms.
pub fn apply_operator(op: &ThetaOperator, y: &LogSeries) -> LogSeries {
    op.terms
        .iter()
        .enumerate()
        .fold(LogSeries::new(Vec::new()), |acc, (k, p)| acc.add(&p.apply(y).shift(k as i64)))
}

fn factorials(n: usize) -> Vec<Int> {
    let mut f = vec![Int::one(); n + 1];
    for i in 1..=n {
        f[i] = &f[i - 1] * Int::from(i);
    }
    f
}

/// Coefficients of `Π(x) = Σ_N x^N Σ_{k+l+m=N} (2N)!/(k!l!m!)²` for `N ≤ order`,
/// computed as `C(2N,N)·(N!/(k!l!m!))²`.
pub fn pi_coefficients(order: usize) -> Vec<Int> {
    let f = factorials(order);
    (0..=order)
        .map(|n| {
            let mut s = Int::zero();
            for k in 0..=n {
                for l in 0..=n - k {
                    let m = n - k - l;
                    let multi = &f[n] / (&f[k] * &f[l] * &f[m]);
                    s += &multi * &multi;
                }
            }
            binomial(2 * n as u64, n as u64) * s
        })
        .collect()
}

/// `Π` through `x^order`.
pub fn pi_series(order: usize) -> RationalSeries {
    RationalSeries::power_series(pi_coefficients(order).iter().map(rat_from_int).collect())
}

/// The same coefficients from the three-term recurrence of the operator.
pub fn pi_recurrence(order: usize) -> Vec<Int> {
    let mut a: Vec<Int> = vec![Int::one()];
    for n in 1..=order as i64 {
        let prev1 = &a[(n - 1) as usize];
        let term1 = int(2 * (2 * n - 1) * (10 * n * n - 10 * n + 3)) * prev1;
        let term2 = if n >= 2 {
            int(36 * (n - 1) * (2 * n - 3) * (2 * n - 1)) * &a[(n - 2) as usize]
        } else {
            Int::zero()
        };
        let num = term1 - term2;
        let n3 = int(n * n * n);
        debug_assert!((&num % &n3).is_zero());
        a.push(num / n3);
    }
    a
}

/// The Frobenius solutions `y₀ = Π`, `y₁ = Π·L + g₁`, `y₂ = Π·L² + 2g₁·L + g₂`
/// (`L = log x`), truncated after `x^order`.
#[derive(Clone, Debug)]
pub struct FrobeniusBasis {
    pub order: usize,
    pub pi: RationalSeries,
    pub g1: RationalSeries,
    pub g2: RationalSeries,
}

impl FrobeniusBasis {
    pub fn solutions(&self) -> [LogSeries; 3] {
        let two = rat(2, 1);
        [
            LogSeries::from_series(self.pi.clone()),
            LogSeries::new(vec![self.g1.clone(), self.pi.clone()]),
            LogSeries::new(vec![self.g2.clone(), self.g1.scale(&two), self.pi.clone()]),
        ]
    }
}

/// Solves `Σ_{i≤j} C(j,i) P^{(j−i)} G_i = 0` coefficientwise for `G_j`,
/// where `P^{(d)}` differentiates every `p_k` `d` times in `θ`; the
/// `log^0` part of `P(y_j)` is exactly this expression.
pub fn frobenius_basis(order: usize) -> Result<FrobeniusBasis> {
    if order < 4 {
        return Err(Error::Series(format!("Frobenius basis needs order ≥ 4, got {order}")));
    }
    let op = pf_operator();
    let mut g: Vec<Vec<Rat>> = vec![pi_coefficients(order).iter().map(rat_from_int).collect()];
    for j in 1..=2usize {
        let mut gj = vec![Rat::zero(); order + 1];
        for n in 1..=order {
            let mut rhs = Rat::zero();
            // lower-order terms of P applied to G_j itself
            for (k, p) in op.terms.iter().enumerate().skip(1) {
                if k <= n {
                    rhs -= p.eval(&rat((n - k) as i64, 1)) * &gj[n - k];
                }
            }
            for (i, gi) in g.iter().enumerate() {
                let c = rat_from_int(&binomial(j as u64, i as u64));
                rhs -= c * op.coefficient_at(j - i, gi, n);
            }
            let p0n = op.terms[0].eval(&rat(n as i64, 1));
            gj[n] = rhs / p0n;
        }
        g.push(gj);
    }
    Ok(FrobeniusBasis {
        order,
        pi: RationalSeries::power_series(g[0].clone()),
        g1: RationalSeries::power_series(g[1].clone()),
        g2: RationalSeries::power_series(g[2].clone()),
    })
}

/// `2πi·t = log x + h(x)` with `h = g₁/Π`, and `x` as a series in `q = e^{2πit}`.
#[derive(Clone, Debug)]
pub struct MirrorMap {
    pub order: usize,
    pub h: RationalSeries,
    pub q_of_x: RationalSeries,
    pub x_of_q: RationalSeries,
}

impl MirrorMap {
    /// Whether every `q`-coefficient through `order` is an integer.
    pub fn is_integral(&self) -> Result<bool> {
        Ok(self
            .x_of_q
            .coeffs_range(0, self.order as i64)?
            .iter()
            .all(|c| c.is_integer()))
    }
}

pub fn mirror_map(order: usize) -> Result<MirrorMap> {
    if order < 4 {
        return Err(Error::Series(format!("mirror map needs order ≥ 4, got {order}")));
    }
    let fb = frobenius_basis(order)?;
    let h = fb.g1.div(&fb.pi)?;
    let q_of_x = h.exp()?.shift(1).truncate(order as i64 + 1);
    let x_of_q = q_of_x.reversion()?;
    Ok(MirrorMap {
        order,
        h,
        q_of_x,
        x_of_q,
    })
}

/// `{t,x} = t‴/t′ − (3/2)(t″/t′)²` from the Laurent series `t′`.
pub fn schwarzian_from_derivative(tp: &RationalSeries) -> Result<RationalSeries> {
    let t2 = tp.derivative();
    let t3 = t2.derivative();
    let inv = tp.inverse()?;
    let a = t3.mul(&inv);
    let b = t2.mul(&inv);
    Ok(a.sub(&b.mul(&b).scale(&rat(3, 2))))
}

/// `{f,x}` for a series `f` with a nonvanishing derivative.
pub fn schwarzian(f: &RationalSeries) -> Result<RationalSeries> {
    schwarzian_from_derivative(&f.derivative())
}

/// `{t,x}` for the mirror coordinate, `t′ = 1/x + h′` up to the constant `2πi`.
pub fn schwarzian_of_mirror_map(order: usize) -> Result<RationalSeries> {
    let mm = mirror_map(order)?;
    let tp = RationalSeries::monomial(Rat::one(), -1).add(&mm.h.derivative());
    schwarzian_from_derivative(&tp)
}

pub const SCHWARZIAN_NUMERATOR: [i64; 5] = [1, -52, 1500, -6048, 15552];

/// `2x²(1−36x)²(1−4x)²`.
pub fn schwarzian_denominator() -> RationalSeries {
    let a = RationalSeries::polynomial_i64(&[1, -36]);
    let b = RationalSeries::polynomial_i64(&[1, -4]);
    a.mul(&a).mul(&b).mul(&b).shift(2).scale(&rat(2, 1))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Mismatch {
    pub degree: i64,
    pub expected: String,
    pub got: String,
}

#[derive(Clone, Debug, Serialize)]
pub struct SeriesCheck {
    pub order: usize,
    pub passed: bool,
    pub computed: Vec<String>,
    pub first_mismatch: Option<Mismatch>,
}

fn compare(order: usize, from: i64, to: i64, got: &RationalSeries, want: &RationalSeries) -> Result<SeriesCheck> {
    let g = got.coeffs_range(from, to)?;
    let w = want.coeffs_range(from, to)?;
    let first_mismatch = g
        .iter()
        .zip(&w)
        .enumerate()
        .find(|(_, (a, b))| a != b)
        .map(|(i, (a, b))| Mismatch {
            degree: from + i as i64,
            expected: rat_to_string(b),
            got: rat_to_string(a),
        });
    Ok(SeriesCheck {
        order,
        passed: first_mismatch.is_none(),
        computed: g.iter().map(rat_to_string).collect(),
        first_mismatch,
    })
}

/// Checks `2x²(1−36x)²(1−4x)²·{t,x} = 1 − 52x + 1500x² − 6048x³ + 15552x⁴`
/// through `x^order`.
pub fn schwarzian_check(order: usize) -> Result<SeriesCheck> {
    if order < 8 {
        return Err(Error::Series(format!("Schwarzian check needs order ≥ 8, got {order}")));
    }
    // {t,x} loses two orders against h; the x² factor gives them back
    let s = schwarzian_of_mirror_map(order + 1)?;
    let numerator = s.mul(&schwarzian_denominator());
    let target = RationalSeries::polynomial_i64(&SCHWARZIAN_NUMERATOR);
    compare(order, 0, order as i64, &numerator, &target)
}

/// `z = 48x/(12x+1)`, sending `0, 1/36, 1/4, ∞` to `0, 1, 3, 4`.
pub fn standard_form_coordinate(x: Option<&Rat>) -> Option<Rat> {
    match x {
        None => Some(rat(4, 1)),
        Some(x) => {
            let den = rat(12, 1) * x + Rat::one();
            (!den.is_zero()).then(|| rat(48, 1) * x / den)
        }
    }
}

pub const STANDARD_POINTS: [i64; 4] = [0, 1, 3, 4];

/// `(αᵢ, βᵢ)` at `z = 0, 1, 3, 4`.
pub fn standard_form_data() -> [(Rat, Rat); 4] {
    [
        (rat(0, 1), rat(13, 24)),
        (rat(1, 2), rat(-3, 16)),
        (rat(1, 2), rat(1, 48)),
        (rat(1, 2), rat(-3, 8)),
    ]
}

/// `Σᵢ [½(1−αᵢ²)/(z−aᵢ)² + βᵢ/(z−aᵢ)]` expanded at `z = 0` to precision `prec`.
pub fn standard_form_expected(prec: i64) -> RationalSeries {
    let mut acc = RationalSeries::zero();
    for (a, (alpha, beta)) in STANDARD_POINTS.iter().zip(standard_form_data()) {
        let double = (Rat::one() - &alpha * &alpha) / rat(2, 1);
        if *a == 0 {
            acc = acc
                .add(&RationalSeries::monomial(double, -2))
                .add(&RationalSeries::monomial(beta, -1));
            continue;
        }
        // 1/(z−a) = −Σ z^k/a^(k+1), 1/(z−a)² = Σ (k+1) z^k/a^(k+2)
        let a = rat(*a, 1);
        let n = prec.max(0) as usize;
        let simple: Vec<Rat> = (0..n).map(|k| -Rat::one() / pow_rat(&a, k + 1)).collect();
        let dbl: Vec<Rat> = (0..n).map(|k| rat(k as i64 + 1, 1) / pow_rat(&a, k + 2)).collect();
        let s = RationalSeries::new(0, simple, Some(prec)).scale(&beta);
        let d = RationalSeries::new(0, dbl, Some(prec)).scale(&double);
        acc = acc.add(&s).add(&d);
    }
    acc.truncate(prec)
}

fn pow_rat(a: &Rat, k: usize) -> Rat {
    (0..k).fold(Rat::one(), |acc, _| acc * a)
}

/// `{t,z} = {t,x}(dx/dz)²` (the `{x,z}` term vanishes for Möbius `x(z)`)
/// compared against the standard form through `z^order`.
pub fn standard_form_check(order: usize) -> Result<SeriesCheck> {
    if order < 8 {
        return Err(Error::Series(format!("standard-form check needs order ≥ 8, got {order}")));
    }
    let prec = order as i64 + 1;
    let s_x = schwarzian_of_mirror_map(order + 3)?;
    // x = z/(12(4−z)), dx/dz = 1/(3(4−z)²)
    let inner_prec = prec + 4;
    let four_minus_z = RationalSeries::polynomial_i64(&[4, -1]);
    let x_of_z = RationalSeries::x()
        .mul(&four_minus_z.scale(&rat(12, 1)).inverse_to(inner_prec)?);
    let dxdz = four_minus_z
        .mul(&four_minus_z)
        .scale(&rat(3, 1))
        .inverse_to(inner_prec)?;
    let s_z = s_x.compose(&x_of_z)?.mul(&dxdz.mul(&dxdz));
    compare(order, -2, order as i64, &s_z, &standard_form_expected(prec))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn pi_first_coefficients() {
        let c = pi_coefficients(4);
        assert_eq!(c, vec![int(1), int(6), int(90), int(1860), int(44730)]);
        assert_eq!(pi_recurrence(4), c);
    }

    #[test]
    fn operator_annihilates_pi() {
        let y = LogSeries::from_series(pi_series(50));
        let r = apply_operator(&pf_operator(), &y);
        assert!(r.is_zero_through_prec());
        assert_eq!(r.prec(), Some(51));
        let one = LogSeries::from_series(RationalSeries::one());
        let r1 = apply_operator(&pf_operator(), &one);
        assert_eq!(r1.parts[0].coeff(1), Some(rat(-6, 1)));
    }

    #[test]
    fn theta_cubed_on_monomial() {
        let t3 = ThetaPoly::from_i64(&[0, 0, 0, 1]);
        let y = LogSeries::from_series(RationalSeries::monomial(rat(1, 1), 2));
        assert_eq!(t3.apply(&y).parts[0], RationalSeries::monomial(rat(8, 1), 2));
    }

    #[test]
    fn operator_matches_recurrence_shape() {
        let op = pf_operator();
        assert_eq!(op.shape(), (3, 2));
        // recurrence coefficients −p₁(N−1) and −p₂(N−2)
        for n in 2..8i64 {
            let p1 = op.terms[1].eval(&rat(n - 1, 1));
            let p2 = op.terms[2].eval(&rat(n - 2, 1));
            assert_eq!(-p1, rat(2 * (2 * n - 1) * (10 * n * n - 10 * n + 3), 1));
            assert_eq!(p2, rat(36 * (n - 1) * (2 * n - 3) * (2 * n - 1), 1));
        }
    }

    #[test]
    fn frobenius_solutions_are_annihilated() {
        let fb = frobenius_basis(20).unwrap();
        assert_eq!(fb.g1.coeff(0), Some(Rat::zero()));
        assert_eq!(fb.g2.coeff(0), Some(Rat::zero()));
        assert_eq!(fb.g1.coeff(1), Some(rat(14, 1)));
        for y in fb.solutions() {
            let r = apply_operator(&pf_operator(), &y);
            assert!(r.is_zero_through_prec(), "{r:?}");
            assert_eq!(r.prec(), Some(21));
        }
    }

    #[test]
    fn mirror_map_leading_terms() {
        let mm = mirror_map(12).unwrap();
        assert_eq!(mm.x_of_q.coeff(0), Some(Rat::zero()));
        assert_eq!(mm.x_of_q.coeff(1), Some(Rat::one()));
        assert!(mm.is_integral().unwrap());
        let round = mm.q_of_x.compose(&mm.x_of_q).unwrap();
        assert_eq!(round.coeffs_range(0, 12).unwrap(), RationalSeries::x().truncate(13).coeffs_range(0, 12).unwrap());
    }

    #[test]
    fn schwarzian_small_order() {
        let c = schwarzian_check(10).unwrap();
        assert!(c.passed, "{:?}", c.first_mismatch);
        assert_eq!(c.computed[0], "1");
        assert_eq!(c.computed[1], "-52");
    }

    #[test]
    fn standard_form_small_order() {
        let c = standard_form_check(10).unwrap();
        assert!(c.passed, "{:?}", c.first_mismatch);
        // ½ z⁻² from α₀ = 0
        assert_eq!(c.computed[0], "1/2");
    }

    #[test]
    fn singular_points_map() {
        let imgs: Vec<Rat> = [Some(rat(0, 1)), Some(rat(1, 36)), Some(rat(1, 4)), None]
            .iter()
            .map(|x| standard_form_coordinate(x.as_ref()).unwrap())
            .collect();
        assert_eq!(imgs, STANDARD_POINTS.iter().map(|&a| rat(a, 1)).collect::<Vec<_>>());
    }
}
