//! Finite-dimensional sequence lattices: `ℓ_p^n` and Lorentz spaces `ℓ_{p,q}^n`.
//!
//! Both families are symmetric and 1-unconditional, so every norm depends only
//! on the decreasing rearrangement `z*` of `|z|`. The Lorentz norm is
//! `‖z‖_{p,q} = ‖(z*_k k^{1/p−1/q})_k‖_q`; it is a norm for `q ≤ p` and a
//! quasi-norm otherwise.

use std::fmt;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::bracket::Bracket;
use crate::error::{Error, Result};

/// Hölder conjugate `p′` with `1/p + 1/p′ = 1`.
pub fn conjugate(p: f64) -> f64 {
    if p == 1.0 {
        f64::INFINITY
    } else if p.is_infinite() {
        1.0
    } else {
        p / (p - 1.0)
    }
}

/// `1/p`, with `1/∞ = 0`.
fn recip(p: f64) -> f64 {
    if p.is_infinite() {
        0.0
    } else {
        1.0 / p
    }
}

/// Lattice family.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Family {
    Lp { p: f64 },
    Lorentz { p: f64, q: f64 },
}

impl Family {
    /// `"lp"` or `"lorentz"`.
    pub fn name(&self) -> &'static str {
        match self {
            Family::Lp { .. } => "lp",
            Family::Lorentz { .. } => "lorentz",
        }
    }
}

/// A lattice `X_n`: a family together with a dimension.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct LatticeSpec {
    family: Family,
    n: usize,
}

impl LatticeSpec {
    /// Validates `1 ≤ p, q ≤ ∞` and `n ≥ 1`.
    pub fn new(family: Family, n: usize) -> Result<Self> {
        let ok = |x: f64| x >= 1.0 && !x.is_nan();
        let valid = match family {
            Family::Lp { p } => ok(p),
            Family::Lorentz { p, q } => ok(p) && ok(q),
        };
        if !valid {
            return Err(Error::InvalidArgument(format!("exponents out of range in {family:?}")));
        }
        if n == 0 {
            return Err(Error::InvalidArgument("dimension must be positive".into()));
        }
        Ok(LatticeSpec { family, n })
    }

    /// `ℓ_p^n`.
    ///
    /// # Panics
    /// Panics if `p < 1` or `n = 0`.
    pub fn lp(p: f64, n: usize) -> Self {
        Self::new(Family::Lp { p }, n).expect("invalid lp lattice")
    }

    /// `ℓ_{p,q}^n`.
    ///
    /// # Panics
    /// Panics if `p < 1`, `q < 1` or `n = 0`.
    pub fn lorentz(p: f64, q: f64, n: usize) -> Self {
        Self::new(Family::Lorentz { p, q }, n).expect("invalid lorentz lattice")
    }

    pub fn family(&self) -> Family {
        self.family
    }

    pub fn dimension(&self) -> usize {
        self.n
    }

    /// Same family in another dimension.
    pub fn with_dimension(&self, n: usize) -> Self {
        LatticeSpec { family: self.family, n }
    }

    /// `(p, q)`, with `q = p` for the `ℓ_p` family.
    pub fn exponents(&self) -> (f64, f64) {
        match self.family {
            Family::Lp { p } => (p, p),
            Family::Lorentz { p, q } => (p, q),
        }
    }

    /// True for `ℓ_{p,q}` with `q > p`.
    pub fn is_quasi_norm(&self) -> bool {
        let (p, q) = self.exponents();
        q > p
    }

    /// Both families are permutation invariant.
    pub fn is_symmetric(&self) -> bool {
        true
    }

    /// True for the max norm `ℓ_∞` (including `ℓ_{∞,∞}`).
    pub fn is_sup_norm(&self) -> bool {
        let (p, q) = self.exponents();
        p.is_infinite() && q.is_infinite()
    }

    /// `ℓ_{p,q}` is 2-convex for `p > 2, q ≥ 2`.
    pub fn is_two_convex(&self) -> bool {
        let (p, q) = self.exponents();
        p > 2.0 && q >= 2.0 || (p == 2.0 && q == 2.0)
    }

    /// `ℓ_{p,q}` is 2-concave for `p < 2, q ≤ 2`.
    pub fn is_two_concave(&self) -> bool {
        let (p, q) = self.exponents();
        p < 2.0 && q <= 2.0 || (p == 2.0 && q == 2.0)
    }

    /// Label such as `lp(2)` or `lorentz(2,1)`.
    pub fn label(&self) -> String {
        match self.family {
            Family::Lp { p } => format!("lp({})", fmt_exp(p)),
            Family::Lorentz { p, q } => format!("lorentz({},{})", fmt_exp(p), fmt_exp(q)),
        }
    }

    /// Precomputed weights for repeated norm evaluation.
    pub fn evaluator(&self) -> NormEvaluator {
        NormEvaluator::new(self)
    }

    /// `‖z‖_X`.
    pub fn norm(&self, z: &[Complex64]) -> Result<f64> {
        self.check(z.len())?;
        let abs: Vec<f64> = z.iter().map(|c| c.norm()).collect();
        Ok(self.evaluator().norm_abs(&abs))
    }

    /// `‖z‖_X` for a real vector (only absolute values matter).
    pub fn norm_real(&self, z: &[f64]) -> Result<f64> {
        self.check(z.len())?;
        Ok(self.evaluator().norm_abs(z))
    }

    /// The Cesàro-type norm `(Σ_k k^{q/p−1}((1/k)Σ_{j≤k} z*_j)^q)^{1/q}`,
    /// equivalent to the Lorentz norm with `‖z‖ ≤ ‖z‖* ≤ p′‖z‖` for `p > 1`.
    pub fn star_norm(&self, z: &[Complex64]) -> Result<f64> {
        let (p, q) = match self.family {
            Family::Lorentz { p, q } => (p, q),
            Family::Lp { .. } => return Err(Error::FamilyMismatch("star norm is defined for Lorentz lattices".into())),
        };
        self.check(z.len())?;
        let star = decreasing_abs(z.iter().map(|c| c.norm()));
        let mut cumulative = 0.0;
        if q.is_infinite() {
            let mut best: f64 = 0.0;
            for (i, v) in star.iter().enumerate() {
                let k = (i + 1) as f64;
                cumulative += v;
                best = best.max(k.powf(recip(p)) * cumulative / k);
            }
            return Ok(best);
        }
        let mut acc = 0.0;
        for (i, v) in star.iter().enumerate() {
            let k = (i + 1) as f64;
            cumulative += v;
            acc += k.powf(q * recip(p) - 1.0) * (cumulative / k).powf(q);
        }
        Ok(acc.powf(1.0 / q))
    }

    /// Köthe dual. Exact for `ℓ_p` and for Lorentz spaces that coincide
    /// with `ℓ_p` or `ℓ_1`; otherwise the returned space is equivalent up
    /// to constants.
    pub fn dual(&self) -> DualSpec {
        match self.family {
            Family::Lp { p } => DualSpec { lattice: LatticeSpec::lp(conjugate(p), self.n), exact: true },
            Family::Lorentz { p, q } => {
                let exact = p == q || (p == 1.0 && q == 1.0);
                DualSpec { lattice: LatticeSpec::lorentz(conjugate(p), conjugate(q), self.n), exact }
            }
        }
    }

    /// `φ_X(k) = ‖Σ_{j≤k} e_j‖_X`.
    pub fn fundamental_function(&self, k: usize) -> Result<f64> {
        if k == 0 || k > self.n {
            return Err(Error::InvalidArgument(format!("k={k} outside 1..={}", self.n)));
        }
        Ok(self.evaluator().flat(k))
    }

    /// `φ_{X′}(k) = k/φ_X(k)`, exact for symmetric Banach lattices.
    /// Returns `None` for quasi-norms.
    pub fn dual_fundamental_function(&self, k: usize) -> Result<Option<f64>> {
        if self.is_quasi_norm() {
            return Ok(None);
        }
        Ok(Some(k as f64 / self.fundamental_function(k)?))
    }

    fn check(&self, len: usize) -> Result<()> {
        if len != self.n {
            return Err(Error::DimensionMismatch { expected: self.n, got: len });
        }
        Ok(())
    }
}

impl fmt::Display for LatticeSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} n={}", self.label(), self.n)
    }
}

fn fmt_exp(x: f64) -> String {
    if x.is_infinite() {
        "inf".into()
    } else {
        format!("{x}")
    }
}

/// Dual lattice together with a flag telling whether the identification is
/// isometric.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct DualSpec {
    pub lattice: LatticeSpec,
    pub exact: bool,
}

#[derive(Serialize, Deserialize)]
#[serde(untagged)]
enum Exponent {
    Num(f64),
    Text(String),
}

impl Exponent {
    fn of(x: f64) -> Exponent {
        if x.is_infinite() {
            Exponent::Text("inf".into())
        } else {
            Exponent::Num(x)
        }
    }

    fn value(&self) -> std::result::Result<f64, String> {
        match self {
            Exponent::Num(x) => Ok(*x),
            Exponent::Text(t) if t == "inf" || t == "infinity" => Ok(f64::INFINITY),
            Exponent::Text(t) => Err(format!("bad exponent {t}")),
        }
    }
}

#[derive(Serialize, Deserialize)]
struct LatticeWire {
    family: String,
    p: Exponent,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    q: Option<Exponent>,
    n: usize,
}

impl Serialize for LatticeSpec {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let wire = match self.family {
            Family::Lp { p } => LatticeWire { family: "lp".into(), p: Exponent::of(p), q: None, n: self.n },
            Family::Lorentz { p, q } => {
                LatticeWire { family: "lorentz".into(), p: Exponent::of(p), q: Some(Exponent::of(q)), n: self.n }
            }
        };
        wire.serialize(s)
    }
}

impl<'de> Deserialize<'de> for LatticeSpec {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let wire = LatticeWire::deserialize(d)?;
        let p = wire.p.value().map_err(D::Error::custom)?;
        let family = match wire.family.as_str() {
            "lp" => Family::Lp { p },
            "lorentz" => {
                let q = wire.q.ok_or_else(|| D::Error::custom("lorentz requires q"))?.value().map_err(D::Error::custom)?;
                Family::Lorentz { p, q }
            }
            other => return Err(D::Error::custom(format!("unknown family {other}"))),
        };
        LatticeSpec::new(family, wire.n).map_err(D::Error::custom)
    }
}

/// Stable decreasing rearrangement of absolute values.
pub fn decreasing_abs(values: impl Iterator<Item = f64>) -> Vec<f64> {
    let mut v: Vec<f64> = values.map(f64::abs).collect();
    v.sort_by(|a, b| b.partial_cmp(a).unwrap_or(std::cmp::Ordering::Equal));
    v
}

#[derive(Clone, Copy, Debug)]
enum Kind {
    /// `(Σ w_k (z*_k)^q)^{1/q}`.
    Power { q: f64 },
    /// `max_k z*_k k^{1/p}`.
    Weak,
}

/// A lattice norm with precomputed rearrangement weights.
#[derive(Clone, Debug)]
pub struct NormEvaluator {
    kind: Kind,
    /// Whether the weights are constant, so no sorting is needed.
    plain: bool,
    weights: Vec<f64>,
    n: usize,
}

impl NormEvaluator {
    fn new(x: &LatticeSpec) -> Self {
        let (p, q) = x.exponents();
        let n = x.n;
        if q.is_infinite() {
            let weights = (1..=n).map(|k| (k as f64).powf(recip(p))).collect();
            return NormEvaluator { kind: Kind::Weak, plain: p.is_infinite(), weights, n };
        }
        let e = q * recip(p) - 1.0;
        let weights = (1..=n).map(|k| (k as f64).powf(e)).collect();
        NormEvaluator { kind: Kind::Power { q }, plain: e == 0.0, weights, n }
    }

    pub fn dimension(&self) -> usize {
        self.n
    }

    /// The weights `w_k` of the rearrangement form (`k^{q/p−1}` for finite
    /// `q`, `k^{1/p}` for `q = ∞`).
    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    /// `q`, or `∞` for weak-type norms.
    pub fn power(&self) -> f64 {
        match self.kind {
            Kind::Power { q } => q,
            Kind::Weak => f64::INFINITY,
        }
    }

    /// Norm of a vector given through its entries' absolute values.
    pub fn norm_abs(&self, z: &[f64]) -> f64 {
        if self.plain {
            return self.sum_form(z.iter().map(|v| v.abs()), |_| 1.0);
        }
        let star = decreasing_abs(z.iter().copied());
        self.norm_decreasing(&star)
    }

    /// Norm of a vector that is already nonnegative and decreasing.
    pub fn norm_decreasing(&self, star: &[f64]) -> f64 {
        self.sum_form(star.iter().copied(), |k| self.weights[k])
    }

    fn sum_form(&self, values: impl Iterator<Item = f64>, w: impl Fn(usize) -> f64) -> f64 {
        match self.kind {
            Kind::Weak => values.enumerate().map(|(k, v)| v * w(k)).fold(0.0, f64::max),
            Kind::Power { q } => {
                if q == 1.0 {
                    values.enumerate().map(|(k, v)| w(k) * v).sum()
                } else if q == 2.0 {
                    values.enumerate().map(|(k, v)| w(k) * v * v).sum::<f64>().sqrt()
                } else {
                    // scale by the max entry to avoid overflow in v^q
                    let vals: Vec<f64> = values.collect();
                    let top = vals.iter().copied().fold(0.0, f64::max);
                    if top == 0.0 {
                        return 0.0;
                    }
                    let s: f64 = vals.iter().enumerate().map(|(k, v)| w(k) * (v / top).powf(q)).sum();
                    top * s.powf(1.0 / q)
                }
            }
        }
    }

    /// `φ(k)`: norm of the flat vector with `k` ones.
    pub fn flat(&self, k: usize) -> f64 {
        match self.kind {
            Kind::Weak => self.weights[k - 1],
            Kind::Power { q } => self.weights[..k].iter().sum::<f64>().powf(1.0 / q),
        }
    }
}

/// Certified bracket for `‖id: X_n → Y_n‖`.
///
/// Closed forms are used for `ℓ_p → ℓ_q` and for `ℓ_{p,q} → ℓ_p` with
/// `q ≤ p`. Otherwise the lower end probes unit vectors, flat vectors and
/// 200 random decreasing profiles, and the upper end is the best of the
/// rearrangement majorant `‖(1/φ_X(k))_k‖_Y` (valid because
/// `z*_k φ_X(k) ≤ ‖z‖_X`) and, when `X` has `q = 1` and `Y` is normed,
/// `max_k φ_Y(k)/φ_X(k)` (exact there, as the unit ball's decreasing part
/// is the convex hull of normalized flat vectors).
pub fn embedding_norm(x: &LatticeSpec, y: &LatticeSpec, seed: u64) -> Result<Bracket> {
    if x.n != y.n {
        return Err(Error::DimensionMismatch { expected: x.n, got: y.n });
    }
    let n = x.n as f64;
    let (px, qx) = x.exponents();
    let (py, qy) = y.exponents();
    if px == qx && py == qy {
        let v = n.powf(recip(py) - recip(px)).max(1.0);
        return Ok(Bracket::exact(v, "closed form max{1, n^(1/q-1/p)}"));
    }
    if py == qy && px == py && qx <= px {
        return Ok(Bracket::exact(1.0, "closed form: decreasing weights"));
    }
    let ex = x.evaluator();
    let ey = y.evaluator();
    let mut lo: f64 = 1.0;
    let mut evals = 1u64;
    for k in 1..=x.n {
        lo = lo.max(ey.flat(k) / ex.flat(k));
        evals += 1;
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..200 {
        let mut z: Vec<f64> = (0..x.n).map(|_| rng.random::<f64>().powi(3)).collect();
        z.sort_by(|a, b| b.partial_cmp(a).unwrap());
        let nx = ex.norm_decreasing(&z);
        if nx > 0.0 {
            lo = lo.max(ey.norm_decreasing(&z) / nx);
        }
        evals += 1;
    }
    let majorant: Vec<f64> = (1..=x.n).map(|k| 1.0 / ex.flat(k)).collect();
    let mut hi = ey.norm_decreasing(&majorant);
    let mut method = "flat/random probes; rearrangement majorant";
    if qx == 1.0 && !y.is_quasi_norm() {
        let flat_max = (1..=x.n).map(|k| ey.flat(k) / ex.flat(k)).fold(0.0, f64::max);
        if flat_max < hi {
            hi = flat_max;
            method = "flat/random probes; flat extreme points";
        }
    }
    hi *= 1.0 + 1e-12;
    Ok(Bracket::new(lo.min(hi), hi, method, evals))
}

/// Upper bound `‖id: X→Y‖·‖id: Y→X‖` for the Banach–Mazur distance.
pub fn banach_mazur_upper(x: &LatticeSpec, y: &LatticeSpec) -> Result<f64> {
    Ok(embedding_norm(x, y, 0)?.hi * embedding_norm(y, x, 0)?.hi)
}

/// Lozanovskiĭ factorization in `ℓ_1 = ℓ_p · ℓ_{p′}`: `g = f^{1/p}`,
/// `h = f^{1/p′}`, so `g·h = f` and `‖g‖_p‖h‖_{p′} = ‖f‖_1`.
pub fn lozanovskii_factor_lp(p: f64, f: &[f64]) -> Result<(Vec<f64>, Vec<f64>)> {
    if !(p > 1.0 && p.is_finite()) {
        return Err(Error::InvalidArgument(format!("p={p} must lie in (1, ∞)")));
    }
    if let Some(i) = f.iter().position(|&v| v < 0.0 || v.is_nan()) {
        return Err(Error::NegativeEntry(i));
    }
    let pc = conjugate(p);
    let g = f.iter().map(|v| v.powf(1.0 / p)).collect();
    let h = f.iter().map(|v| v.powf(1.0 / pc)).collect();
    Ok((g, h))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(v: &[f64]) -> Vec<Complex64> {
        v.iter().map(|&x| Complex64::new(x, 0.0)).collect()
    }

    #[test]
    fn norm_examples() {
        assert!((LatticeSpec::lp(2.0, 2).norm(&c(&[3.0, 4.0])).unwrap() - 5.0).abs() < 1e-12);
        let l21 = LatticeSpec::lorentz(2.0, 1.0, 3);
        let v = l21.norm(&c(&[1.0, 1.0, 0.0])).unwrap();
        assert!((v - (1.0 + 2f64.powf(-0.5))).abs() < 1e-12);
        for (p, q) in [(2.0, 1.0), (1.5, 3.0), (f64::INFINITY, 2.0), (3.0, f64::INFINITY)] {
            let x = LatticeSpec::lorentz(p, q, 3);
            assert!((x.norm(&c(&[0.0, 1.0, 0.0])).unwrap() - 1.0).abs() < 1e-12);
        }
        assert_eq!(LatticeSpec::lp(f64::INFINITY, 3).norm(&c(&[1.0, -4.0, 2.0])).unwrap(), 4.0);
        assert!(LatticeSpec::lp(2.0, 2).norm(&c(&[1.0])).is_err());
    }

    #[test]
    fn star_norm_examples() {
        let x = LatticeSpec::lorentz(1.0, 1.0, 2);
        assert!((x.star_norm(&c(&[1.0, 1.0])).unwrap() - 2.0).abs() < 1e-12);
        let x = LatticeSpec::lorentz(2.0, 4.0, 3);
        assert!(x.star_norm(&c(&[1.0, 0.0, 0.0])).unwrap() >= 1.0);
        assert!(LatticeSpec::lp(2.0, 2).star_norm(&c(&[1.0, 1.0])).is_err());
    }

    #[test]
    fn dual_examples() {
        assert_eq!(LatticeSpec::lp(1.0, 3).dual().lattice, LatticeSpec::lp(f64::INFINITY, 3));
        assert_eq!(LatticeSpec::lp(2.0, 3).dual().lattice, LatticeSpec::lp(2.0, 3));
        let d = LatticeSpec::lorentz(2.0, 1.0, 3).dual();
        assert_eq!(d.lattice, LatticeSpec::lorentz(2.0, f64::INFINITY, 3));
        assert!(!d.exact);
    }

    #[test]
    fn fundamental_function_examples() {
        assert!((LatticeSpec::lp(3.0, 8).fundamental_function(8).unwrap() - 2.0).abs() < 1e-12);
        let v = LatticeSpec::lorentz(2.0, 1.0, 4).fundamental_function(2).unwrap();
        assert!((v - (1.0 + 2f64.powf(-0.5))).abs() < 1e-12);
        assert_eq!(LatticeSpec::lorentz(3.0, 1.5, 4).fundamental_function(1).unwrap(), 1.0);
        assert!(LatticeSpec::lp(2.0, 4).fundamental_function(5).is_err());
        assert_eq!(LatticeSpec::lp(f64::INFINITY, 4).fundamental_function(4).unwrap(), 1.0);
        assert!((LatticeSpec::lorentz(2.0, f64::INFINITY, 4).fundamental_function(4).unwrap() - 2.0).abs() < 1e-12);
    }

    #[test]
    fn embedding_examples() {
        let b = embedding_norm(&LatticeSpec::lp(1.0, 4), &LatticeSpec::lp(2.0, 4), 0).unwrap();
        assert_eq!((b.lo, b.hi), (1.0, 1.0));
        let b = embedding_norm(&LatticeSpec::lp(2.0, 4), &LatticeSpec::lp(1.0, 4), 0).unwrap();
        assert!((b.lo - 2.0).abs() < 1e-12 && (b.hi - 2.0).abs() < 1e-12);
        let b = embedding_norm(&LatticeSpec::lorentz(2.0, 1.0, 8), &LatticeSpec::lp(2.0, 8), 0).unwrap();
        assert_eq!((b.lo, b.hi), (1.0, 1.0));
    }

    #[test]
    fn embedding_brackets_are_ordered() {
        let xs = [
            LatticeSpec::lorentz(2.0, 1.0, 16),
            LatticeSpec::lorentz(3.0, 4.0, 16),
            LatticeSpec::lp(1.5, 16),
            LatticeSpec::lorentz(1.5, 1.0, 16),
        ];
        for x in &xs {
            for y in &xs {
                let b = embedding_norm(x, y, 7).unwrap();
                assert!(b.is_valid(), "{x} -> {y}: {b:?}");
            }
        }
    }

    #[test]
    fn lozanovskii_examples() {
        let (g, h) = lozanovskii_factor_lp(2.0, &[0.5, 0.5]).unwrap();
        assert!((g[0] - 0.5f64.sqrt()).abs() < 1e-15 && (h[1] - 0.5f64.sqrt()).abs() < 1e-15);
        let (g, h) = lozanovskii_factor_lp(2.0, &[1.0, 0.0]).unwrap();
        assert_eq!((g, h), (vec![1.0, 0.0], vec![1.0, 0.0]));
        let (g, h) = lozanovskii_factor_lp(3.0, &[0.2, 0.8]).unwrap();
        let prod = LatticeSpec::lp(3.0, 2).norm_real(&g).unwrap() * LatticeSpec::lp(1.5, 2).norm_real(&h).unwrap();
        assert!((prod - 1.0).abs() < 1e-12);
        assert_eq!(lozanovskii_factor_lp(2.0, &[1.0, -1.0]), Err(Error::NegativeEntry(1)));
    }

    #[test]
    fn serde_round_trip() {
        for x in [LatticeSpec::lp(2.0, 3), LatticeSpec::lp(f64::INFINITY, 2), LatticeSpec::lorentz(2.0, f64::INFINITY, 5)] {
            let text = serde_json::to_string(&x).unwrap();
            let back: LatticeSpec = serde_json::from_str(&text).unwrap();
            assert_eq!(back, x);
        }
        assert_eq!(
            serde_json::to_string(&LatticeSpec::lorentz(2.0, 1.0, 3)).unwrap(),
            r#"{"family":"lorentz","p":2.0,"q":1.0,"n":3}"#
        );
    }
}
