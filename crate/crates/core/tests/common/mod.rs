//! Shared generators, independent oracles and property checks for the
//! integration tests. Each `check_*` returns `Err` with a description of the
//! first violated property.

#![allow(dead_code)]

use k3mirror::arith::{int, rat, Int, IntMatrix, Matrix, Rat};
use k3mirror::discriminant::{construct_mirror_embedding, glue_extends, in_kernel_star, induced_disc_action, mirror_transport};
use k3mirror::lattice::{hyperbolic_extension, IntLattice, Isometry, StandardLattice};
use k3mirror::modular::{gamma0_plus_generators, r_map, table1, FracLinear, Gamma0Variant};
use k3mirror::mukai::{normalize_mukai_vector, Action, MukaiVector, NsContext};
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

// ---------------------------------------------------------------- contexts

/// Rank-two NS with Gram `[[2a, b], [b, -2]]`, ample class `(1, 0)` and
/// `(-2)`-class `(0, 1)`.
pub fn ctx_rank_two(a: i64, b: i64) -> NsContext {
    let ns = IntLattice::new(Some("NS2".into()), k3mirror::arith::imat(&[&[2 * a, b], &[b, -2]])).unwrap();
    NsContext::new(ns, vec![int(1), int(0)]).unwrap()
}

pub fn random_ctx(r: &mut impl Rng) -> NsContext {
    if r.gen_bool(0.5) {
        NsContext::rank_one(r.gen_range(1..=20)).unwrap()
    } else {
        ctx_rank_two(r.gen_range(1..=10), r.gen_range(-3..=3))
    }
}

pub fn random_ns_vec(r: &mut impl Rng, ctx: &NsContext, bound: i64) -> Vec<Int> {
    (0..ctx.ns().rank()).map(|_| int(r.gen_range(-bound..=bound))).collect()
}

pub fn random_vector(r: &mut impl Rng, ctx: &NsContext) -> MukaiVector {
    MukaiVector::new(int(r.gen_range(-40..=40)), random_ns_vec(r, ctx, 15), int(r.gen_range(-40..=40)))
}

/// All NS classes with entries in `[-bound, bound]` and square `-2`.
pub fn minus_two_classes(ctx: &NsContext, bound: i64) -> Vec<Vec<Int>> {
    let rank = ctx.ns().rank();
    let mut out = Vec::new();
    let mut cur = vec![-bound; rank];
    loop {
        let v: Vec<Int> = cur.iter().map(|&x| int(x)).collect();
        if ctx.ns().bilinear(&v, &v).unwrap() == int(-2) {
            out.push(v);
        }
        let mut i = 0;
        loop {
            if i == rank {
                return out;
            }
            cur[i] += 1;
            if cur[i] <= bound {
                break;
            }
            cur[i] = -bound;
            i += 1;
        }
    }
}

/// Spherical vector `ch(L)·(1,0,1) = (1, b, (b,b)/2 + 1)`.
pub fn spherical_line(ctx: &NsContext, b: &[Int]) -> MukaiVector {
    let sq = ctx.ns().bilinear(b, b).unwrap();
    MukaiVector::new(int(1), b.to_vec(), sq / int(2) + int(1))
}

pub fn random_action(r: &mut impl Rng, ctx: &NsContext) -> Action {
    let curves = if ctx.ns().rank() == 2 { minus_two_classes(ctx, 2) } else { Vec::new() };
    loop {
        match r.gen_range(0..7) {
            0 => return Action::Shift,
            1 => return Action::Switch,
            2 => return Action::Iota2,
            3 => return Action::Tensor { b: random_ns_vec(r, ctx, 4) },
            4 => {
                let b = random_ns_vec(r, ctx, 3);
                return Action::Twist { w: spherical_line(ctx, &b) };
            }
            5 if !curves.is_empty() => {
                let c = curves[r.gen_range(0..curves.len())].clone();
                return Action::Twist {
                    w: MukaiVector::new(int(0), c, int(r.gen_range(-3..=3))),
                };
            }
            6 if !curves.is_empty() => {
                return Action::ReflectCurve {
                    c: curves[r.gen_range(0..curves.len())].clone(),
                }
            }
            _ => {}
        }
    }
}

/// Hand-written Mukai pairing `-(r s' + s r') + (d, d')`.
pub fn pairing_oracle(ctx: &NsContext, x: &MukaiVector, y: &MukaiVector) -> Int {
    -(&x.r * &y.s) - &x.s * &y.r + ctx.ns().bilinear(&x.d, &y.d).unwrap()
}

pub fn check_pairing(ctx: &NsContext, a: &Action, x: &MukaiVector, y: &MukaiVector) -> Result<(), String> {
    let before = pairing_oracle(ctx, x, y);
    if ctx.mukai_pairing(x, y).map_err(|e| e.to_string())? != before {
        return Err(format!("mukai_pairing disagrees with the oracle on {x:?}, {y:?}"));
    }
    let ax = ctx.apply_action(a, x).map_err(|e| e.to_string())?;
    let ay = ctx.apply_action(a, y).map_err(|e| e.to_string())?;
    let after = pairing_oracle(ctx, &ax, &ay);
    if after != before {
        return Err(format!("{a:?} changes ⟨x,y⟩ from {before} to {after} for x = {x:?}, y = {y:?}"));
    }
    Ok(())
}

/// `Tensor(c) ∘ Twist((0,c,1))` against the reflection `x + ⟨x,C⟩C`, `C = (0,c,0)`.
pub fn check_curve_reflection(ctx: &NsContext, c: &[Int], x: &MukaiVector) -> Result<(), String> {
    let oc = MukaiVector::new(int(0), c.to_vec(), int(1));
    let word = [Action::Twist { w: oc }, Action::Tensor { b: c.to_vec() }];
    let lhs = ctx.apply_word(&word, x).map_err(|e| e.to_string())?;
    let curve = MukaiVector::new(int(0), c.to_vec(), int(0));
    let k = pairing_oracle(ctx, x, &curve);
    let want = MukaiVector::new(
        x.r.clone(),
        x.d.iter().zip(c).map(|(a, b)| a + &k * b).collect(),
        x.s.clone(),
    );
    let refl = ctx.reflect_curve(c, x).map_err(|e| e.to_string())?;
    let refl_action = ctx
        .apply_action(&Action::ReflectCurve { c: c.to_vec() }, x)
        .map_err(|e| e.to_string())?;
    if lhs != want || refl != want || refl_action != want {
        return Err(format!("c = {c:?}, x = {x:?}: composite {lhs:?}, reflection {refl:?}, oracle {want:?}"));
    }
    Ok(())
}

pub fn check_involutions(ctx: &NsContext, x: &MukaiVector, w: &MukaiVector) -> Result<(), String> {
    for a in [Action::Switch, Action::Iota2, Action::Shift, Action::Twist { w: w.clone() }] {
        let twice = ctx.apply_word(&[a.clone(), a.clone()], x).map_err(|e| e.to_string())?;
        if &twice != x {
            return Err(format!("{a:?} applied twice sends {x:?} to {twice:?}"));
        }
    }
    Ok(())
}

pub fn check_ring(ctx: &NsContext, x: &MukaiVector, y: &MukaiVector, z: &MukaiVector) -> Result<(), String> {
    let m = |a: &MukaiVector, b: &MukaiVector| ctx.ring_mul(a, b).unwrap();
    if m(x, y) != m(y, x) {
        return Err(format!("ring_mul not commutative on {x:?}, {y:?}"));
    }
    if m(&m(x, y), z) != m(x, &m(y, z)) {
        return Err(format!("ring_mul not associative on {x:?}, {y:?}, {z:?}"));
    }
    // tensoring by a line bundle is multiplication by its Chern character
    let b = y.d.clone();
    let t = ctx.apply_action(&Action::Tensor { b: b.clone() }, x).unwrap();
    if t != m(&ctx.line_bundle(&b).unwrap(), x) {
        return Err(format!("Tensor({b:?}) is not ring multiplication by ch(L) on {x:?}"));
    }
    Ok(())
}

/// A random valid normalization input: the pair `(0,0,1), (1,0,0)` moved by a
/// random word of pairing-preserving actions.
pub fn random_normalize_input(r: &mut impl Rng, n: i64) -> (NsContext, MukaiVector, MukaiVector) {
    let ctx = NsContext::rank_one(n).unwrap();
    let mut v = MukaiVector::from_i64(0, &[0], 1);
    let mut u = MukaiVector::from_i64(1, &[0], 0);
    for _ in 0..r.gen_range(0..=4) {
        let a = match r.gen_range(0..5) {
            0 => Action::Switch,
            1 => Action::Shift,
            2 => Action::Iota2,
            3 => Action::Tensor {
                b: vec![int(r.gen_range(-3..=3))],
            },
            _ => Action::Twist {
                w: spherical_line(&ctx, &[int(r.gen_range(-2..=2))]),
            },
        };
        v = ctx.apply_action(&a, &v).unwrap();
        u = ctx.apply_action(&a, &u).unwrap();
    }
    (ctx, v, u)
}

pub fn check_normalize(ctx: &NsContext, v: &MukaiVector, u: &MukaiVector) -> Result<(), String> {
    let out = normalize_mukai_vector(ctx, v, u).map_err(|e| format!("v = {v:?}, u = {u:?}: {e}"))?;
    let (rv, sv) = (&out.v.r, &out.v.s);
    let m = &out.v.d[0];
    let fail = |why: &str| Err(format!("v = {v:?}, u = {u:?} → {out:?}: {why}"));
    if rv <= &Int::one() {
        return fail("rank not above one");
    }
    if !rv.gcd(sv).is_one() {
        return fail("r and s not coprime");
    }
    if !m.is_positive() {
        return fail("NS part not ample");
    }
    if ctx.apply_word(&out.word, v).unwrap() != out.v || ctx.apply_word(&out.word, u).unwrap() != out.u {
        return fail("word does not reproduce the outputs");
    }
    if pairing_oracle(ctx, &out.u, &out.v) != int(-1) || pairing_oracle(ctx, &out.v, &out.v) != Int::zero() {
        return fail("pairings not preserved");
    }
    Ok(())
}

/// `⟨μ(x), μ(x)⟩ = 0` and `⟨μ(x), f̌⟩ = -1` in `U ⊕ M̌_n`.
pub fn check_mirror_isotropy(n: i64, x: &[Rat]) -> Result<(), String> {
    let m = StandardLattice::McheckN(n).build().unwrap();
    let k = hyperbolic_extension(&m);
    let w = k3mirror::mukai::mirror_period(&m, x).map_err(|e| e.to_string())?;
    let sq = k.bilinear_rat(&w, &w).unwrap();
    let mut f = vec![Rat::zero(); k.rank()];
    *f.last_mut().unwrap() = Rat::one();
    if !sq.is_zero() || k.bilinear_rat(&w, &f).unwrap() != rat(-1, 1) {
        return Err(format!("μ(x) not isotropic for n = {n}: ⟨μ,μ⟩ = {sq}"));
    }
    Ok(())
}

pub fn random_rational(r: &mut impl Rng) -> Rat {
    rat(r.gen_range(-50..=50), r.gen_range(1..=12))
}

// ------------------------------------------------------------- level six

/// `T̄, S̄₁, S̄₂, -id` on `U ⊕ M₆`.
pub fn level_six_alphabet() -> Vec<Isometry> {
    let [t, s1, s2] = table1(6).unwrap().isometries().unwrap();
    let minus = StandardLattice::UPlusMn(6).build().unwrap().identity_isometry().negate();
    vec![t, s1, s2, minus]
}

pub fn word_product(alphabet: &[Isometry], word: &[usize], identity: &Isometry) -> Isometry {
    word.iter().fold(identity.clone(), |acc, &i| acc.compose(&alphabet[i]))
}

/// `R(g₁⋯g_k) = R(g_k)⋯R(g₁)` for a word in the `Γ₀(6)+` generators and
/// their inverses.
pub fn check_r_antihom(word: &[usize]) -> Result<(), String> {
    let mut gens = gamma0_plus_generators(6, Gamma0Variant::Plus).unwrap();
    gens.extend(gens.clone().iter().map(FracLinear::inverse).collect::<Vec<_>>());
    let g = word
        .iter()
        .try_fold(FracLinear::identity(), |acc, &i| acc.compose(&gens[i]))
        .map_err(|e| e.to_string())?;
    let lhs = r_map(&g, 6).unwrap();
    let rhs = word
        .iter()
        .rev()
        .map(|&i| r_map(&gens[i], 6).unwrap())
        .reduce(|a, b| a.mul(&b))
        .unwrap();
    if lhs.matrix != rhs.matrix {
        return Err(format!("R({g}) = {:?} but the reversed product is {:?}", lhs.matrix, rhs.matrix));
    }
    if !lhs.preserves_form() {
        return Err(format!("R({g}) does not preserve Σ"));
    }
    Ok(())
}

/// Orientation oracle on signature (2,1): `w = e + f` is negative, and the
/// positive-plane sign is `det(g)` times the sign of the negative cone action.
pub fn orientation_oracle(l: &IntLattice, g: &Isometry) -> i32 {
    let w = vec![int(1), int(0), int(1)];
    let gw = g.matrix.mul_vec(&w);
    let cone = if l.bilinear(&w, &gw).unwrap().is_negative() { 1 } else { -1 };
    let det = if g.det().is_positive() { 1 } else { -1 };
    det * cone
}

pub fn check_orientation(word_a: &[usize], word_b: &[usize]) -> Result<(), String> {
    let l = StandardLattice::UPlusMn(6).build().unwrap();
    let alpha = level_six_alphabet();
    let id = l.identity_isometry();
    let a = word_product(&alpha, word_a, &id);
    let b = word_product(&alpha, word_b, &id);
    let ab = a.compose(&b);
    let sign = |g: &Isometry| l.orientation_sign_positive(g).unwrap();
    for (g, label) in [(&a, "a"), (&b, "b"), (&ab, "ab")] {
        if sign(g) != orientation_oracle(&l, g) {
            return Err(format!("orientation of {label} disagrees with the cone oracle"));
        }
    }
    if sign(&ab) != sign(&a) * sign(&b) {
        return Err(format!("sign not multiplicative on {word_a:?} · {word_b:?}"));
    }
    Ok(())
}

/// Kernel elements are words in `T̄, S̄₁, (S̄₁S̄₂)²`; conjugates and products of
/// kernel elements stay in the kernel and conjugation preserves non-membership.
pub fn check_kernel_subgroup(kernel_word: &[usize], conj_word: &[usize]) -> Result<(), String> {
    let l = StandardLattice::UPlusMn(6).build().unwrap();
    let alpha = level_six_alphabet();
    let id = l.identity_isometry();
    let s1s2 = alpha[1].compose(&alpha[2]);
    let kernel_gens = [alpha[0].clone(), alpha[1].clone(), s1s2.compose(&s1s2)];
    let k = word_product(&kernel_gens, kernel_word, &id);
    let g = word_product(&alpha, conj_word, &id);
    let conj = |x: &Isometry| g.compose(x).compose(&g.inverse());
    let member = |x: &Isometry| in_kernel_star(&l, x).unwrap();
    if !member(&k) || !member(&conj(&k)) || !member(&k.compose(&k)) || !member(&k.inverse()) {
        return Err(format!("kernel not closed at word {kernel_word:?}, conjugator {conj_word:?}"));
    }
    let gk = g.compose(&k);
    if member(&g) != member(&gk) || member(&g) != member(&conj(&g)) {
        return Err(format!("coset membership not stable for conjugator {conj_word:?}"));
    }
    Ok(())
}

// ------------------------------------------------------------------ glue

/// `R`-images of the `Γ₀(n)+` generators, `-id` and `(-id_U) ⊕ id`.
pub fn n_side_alphabet(n: i64) -> Vec<Isometry> {
    let l = StandardLattice::UPlusMn(n).build().unwrap();
    let mut out: Vec<Isometry> = gamma0_plus_generators(n, Gamma0Variant::Plus)
        .unwrap()
        .iter()
        .map(|g| r_map(g, n).unwrap().to_isometry().unwrap())
        .collect();
    out.push(l.identity_isometry().negate());
    out.push(l.isometry(Matrix::from_fn(3, 3, |i, j| match (i, j) {
        (1, 1) => int(1),
        (i, j) if i == j => int(-1),
        _ => int(0),
    })).unwrap());
    out
}

/// The transported `N`-alphabet, `-id_K`, and a root reflection in `E8(-1)`.
pub fn k_side_alphabet(n: i64) -> Vec<Isometry> {
    let k = StandardLattice::UPlusMcheckN(n).build().unwrap();
    let mut out: Vec<Isometry> = n_side_alphabet(n).iter().map(|g| mirror_transport(g, n).unwrap()).collect();
    out.push(k.identity_isometry().negate());
    let gram = k.gram();
    let root = (0..k.rank()).rev().find(|&i| gram[(i, i)] == int(-2)).unwrap();
    let mut refl: IntMatrix = Matrix::identity(k.rank());
    for j in 0..k.rank() {
        // x ↦ x + (x, r) r
        refl[(root, j)] = &refl[(root, j)] + &gram[(root, j)];
    }
    out.push(k.isometry(refl).unwrap());
    out
}

/// `glue_extends`, `respects_glue` and the multiplier oracle agree: the
/// glue is the graph of an isomorphism of cyclic groups, so `gN ⊕ gK`
/// extends iff the two multipliers agree mod `2n`.
pub fn check_glue(n: i64, word_n: &[usize], word_k: &[usize]) -> Result<bool, String> {
    let gd = construct_mirror_embedding(n).unwrap();
    let an = n_side_alphabet(n);
    let ak = k_side_alphabet(n);
    let gn = word_product(&an, word_n, &gd.n_lattice().identity_isometry());
    let gk = word_product(&ak, word_k, &gd.k_lattice().identity_isometry());
    let ext = glue_extends(&gd, &gn, &gk).map_err(|e| e.to_string())?;
    let resp = gd.respects_glue(&gn, &gk).map_err(|e| e.to_string())?;
    let mult = |l: &IntLattice, g: &Isometry| induced_disc_action(l, g).unwrap().cyclic_multiplier().unwrap();
    let modulus = int(2 * n);
    let oracle = (mult(gd.n_lattice(), &gn) - mult(gd.k_lattice(), &gk)).mod_floor(&modulus).is_zero();
    if ext.is_some() != resp || resp != oracle {
        return Err(format!(
            "n = {n}, words {word_n:?} / {word_k:?}: glue_extends {}, respects_glue {resp}, multiplier oracle {oracle}",
            ext.is_some()
        ));
    }
    if let Some(h) = ext {
        if !gd.overlattice().is_isometry(&h.matrix) {
            return Err("extension is not an isometry of the overlattice".into());
        }
    }
    Ok(oracle)
}

// ------------------------------------------------------------ arithmetic

/// Number of distinct prime factors by trial division.
pub fn omega(mut n: u64) -> u32 {
    let mut count = 0;
    let mut p = 2;
    while p * p <= n {
        if n.is_multiple_of(p) {
            count += 1;
            while n.is_multiple_of(p) {
                n /= p;
            }
        }
        p += 1;
    }
    count + u32::from(n > 1)
}

/// `Σ_{k+l+m=N} (2N)!/(k!l!m!)²`, evaluated term by term.
pub fn pi_triple_sum(order: usize) -> Vec<Int> {
    let fact = |k: usize| (1..=k).fold(Int::one(), |acc, i| acc * Int::from(i));
    (0..=order)
        .map(|n| {
            let top = fact(2 * n);
            let mut s = Int::zero();
            for k in 0..=n {
                for l in 0..=n - k {
                    let d = fact(k) * fact(l) * fact(n - k - l);
                    s += &top / (&d * &d);
                }
            }
            s
        })
        .collect()
}

/// Truncated polynomial in `ε` of degree 2, for the Frobenius deformation.
#[derive(Clone, Debug)]
struct Jet([Rat; 3]);

impl Jet {
    fn constant(c: Rat) -> Self {
        Jet([c, Rat::zero(), Rat::zero()])
    }
    fn linear(c: Rat, e: Rat) -> Self {
        Jet([c, e, Rat::zero()])
    }
    fn mul(&self, o: &Jet) -> Jet {
        let (a, b) = (&self.0, &o.0);
        Jet([&a[0] * &b[0], &a[0] * &b[1] + &a[1] * &b[0], &a[0] * &b[2] + &a[1] * &b[1] + &a[2] * &b[0]])
    }
    fn add(&self, o: &Jet) -> Jet {
        Jet([&self.0[0] + &o.0[0], &self.0[1] + &o.0[1], &self.0[2] + &o.0[2]])
    }
    fn scale(&self, c: i64) -> Jet {
        let c = rat(c, 1);
        Jet([&self.0[0] * &c, &self.0[1] * &c, &self.0[2] * &c])
    }
    fn sub(&self, o: &Jet) -> Jet {
        Jet([&self.0[0] - &o.0[0], &self.0[1] - &o.0[1], &self.0[2] - &o.0[2]])
    }
    fn inverse(&self) -> Jet {
        let a0 = &self.0[0];
        let i0 = Rat::one() / a0;
        let i1 = -&self.0[1] * &i0 * &i0;
        let i2 = (&self.0[1] * &self.0[1] * &i0 - &self.0[2]) * &i0 * &i0;
        Jet([i0, i1, i2])
    }
}

/// Coefficients `(Π_N, g₁_N, g₂_N)` from the recurrence with `N ↦ N + ε`:
/// `y(x, ε) = Σ a_N(ε) x^(N+ε)` gives `g₁ = ∂_ε a`, `g₂ = ∂²_ε a` at `ε = 0`.
pub fn frobenius_oracle(order: usize) -> Vec<[Rat; 3]> {
    let mut a: Vec<Jet> = vec![Jet::constant(Rat::one())];
    for n in 1..=order as i64 {
        let e = Jet::linear(rat(n, 1), Rat::one()); // n + ε
        let two_e_minus = |k: i64| Jet::linear(rat(2 * n - k, 1), rat(2, 1));
        let one = Jet::constant(Rat::one());
        // (n+ε)³ a_n = 2(2(n+ε)-1)(10(n+ε)²-10(n+ε)+3) a_{n-1}
        //            - 36((n+ε)-1)(2(n+ε)-3)(2(n+ε)-1) a_{n-2}
        let quad = e.mul(&e).scale(10).sub(&e.scale(10)).add(&one.scale(3));
        let t1 = two_e_minus(1).mul(&quad).scale(2).mul(&a[(n - 1) as usize]);
        let t2 = if n >= 2 {
            e.sub(&one).mul(&two_e_minus(3)).mul(&two_e_minus(1)).scale(36).mul(&a[(n - 2) as usize])
        } else {
            one.scale(0)
        };
        let cube = e.mul(&e).mul(&e);
        a.push(t1.sub(&t2).mul(&cube.inverse()));
    }
    // Taylor coefficients: a = a₀ + a₁ε + a₂ε², so a'' = 2a₂
    a.into_iter().map(|j| [j.0[0].clone(), j.0[1].clone(), &j.0[2] * rat(2, 1)]).collect()
}

/// `θ³ − 2x(2θ+1)(10θ²+10θ+3) + 36x²(θ+1)(2θ+1)(2θ+3)` applied to a power
/// series by hand: the coefficient of `x^N` of the image.
pub fn operator_oracle(c: &[Int], n: usize) -> Int {
    let t = |k: usize| int(k as i64);
    let mut out = t(n).pow(3) * &c[n];
    if n >= 1 {
        let m = t(n - 1);
        out -= int(2) * (int(2) * &m + int(1)) * (int(10) * &m * &m + int(10) * &m + int(3)) * &c[n - 1];
    }
    if n >= 2 {
        let m = t(n - 2);
        out += int(36) * (&m + int(1)) * (int(2) * &m + int(1)) * (int(2) * &m + int(3)) * &c[n - 2];
    }
    out
}
