//! Sparse multivariate polynomials and certified sup-norm brackets.

use std::collections::BTreeMap;

use num_complex::Complex64;
use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::bracket::{Bracket, Budget};
use crate::certify;
use crate::characteristics::log_sup_monomial;
use crate::error::{Error, Result};
use crate::lattice::LatticeSpec;
use crate::multiindex::{IndexSetSpec, MultiIndex};
use crate::search::{self, SearchSpec};

/// Largest degree accepted by [`Polynomial::polarization_eval`].
pub const POLARIZATION_MAX_DEGREE: u32 = 12;

/// `P(z) = Σ c_α z^α` with finitely many nonzero coefficients.
#[derive(Clone, Debug, PartialEq)]
pub struct Polynomial {
    n: usize,
    coeffs: BTreeMap<MultiIndex, Complex64>,
}

impl Polynomial {
    /// The zero polynomial in `n` variables.
    pub fn zero(n: usize) -> Self {
        Polynomial { n, coeffs: BTreeMap::new() }
    }

    /// Builds a polynomial; repeated indices are summed and zero
    /// coefficients dropped.
    pub fn from_terms(n: usize, terms: impl IntoIterator<Item = (MultiIndex, Complex64)>) -> Result<Self> {
        let mut p = Polynomial::zero(n);
        for (alpha, c) in terms {
            if alpha.dimension() != n {
                return Err(Error::DimensionMismatch { expected: n, got: alpha.dimension() });
            }
            let entry = p.coeffs.entry(alpha).or_insert(Complex64::new(0.0, 0.0));
            *entry += c;
        }
        p.coeffs.retain(|_, c| *c != Complex64::new(0.0, 0.0));
        Ok(p)
    }

    /// Builds a polynomial with real coefficients.
    pub fn from_real(n: usize, terms: impl IntoIterator<Item = (MultiIndex, f64)>) -> Result<Self> {
        Self::from_terms(n, terms.into_iter().map(|(a, c)| (a, Complex64::new(c, 0.0))))
    }

    pub fn dimension(&self) -> usize {
        self.n
    }

    pub fn len(&self) -> usize {
        self.coeffs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&MultiIndex, &Complex64)> {
        self.coeffs.iter()
    }

    pub fn coefficient(&self, alpha: &MultiIndex) -> Complex64 {
        self.coeffs.get(alpha).copied().unwrap_or(Complex64::new(0.0, 0.0))
    }

    /// Maximal order of a term, `None` for the zero polynomial.
    pub fn degree(&self) -> Option<u32> {
        self.coeffs.keys().map(|a| a.order()).max()
    }

    /// True when all terms share one order (the zero polynomial counts).
    pub fn is_homogeneous(&self) -> bool {
        let mut orders = self.coeffs.keys().map(|a| a.order());
        match orders.next() {
            None => true,
            Some(o) => orders.all(|x| x == o),
        }
    }

    /// All coefficients are nonnegative reals.
    pub fn is_nonnegative(&self) -> bool {
        self.coeffs.values().all(|c| c.im == 0.0 && c.re >= 0.0)
    }

    /// Coefficients are invariant under every coordinate transposition.
    pub fn is_symmetric(&self) -> bool {
        self.coeffs.iter().all(|(alpha, c)| {
            let e = alpha.exponents();
            (0..self.n).all(|i| {
                (i + 1..self.n).all(|j| {
                    let mut v = e.to_vec();
                    v.swap(i, j);
                    self.coefficient(&MultiIndex::new(v)) == *c
                })
            })
        })
    }

    /// `P(z)` as a plain monomial sum.
    pub fn evaluate(&self, z: &[Complex64]) -> Result<Complex64> {
        if z.len() != self.n {
            return Err(Error::DimensionMismatch { expected: self.n, got: z.len() });
        }
        Ok(self
            .coeffs
            .iter()
            .map(|(alpha, c)| {
                alpha.exponents().iter().zip(z).fold(*c, |acc, (&e, zi)| if e == 0 { acc } else { acc * zi.powu(e) })
            })
            .sum())
    }

    /// Keeps exactly the coefficients indexed by `set`.
    pub fn project(&self, set: &IndexSetSpec) -> Result<Polynomial> {
        if set.dimension() != self.n {
            return Err(Error::DimensionMismatch { expected: self.n, got: set.dimension() });
        }
        Ok(Polynomial {
            n: self.n,
            coeffs: self.coeffs.iter().filter(|(a, _)| set.contains(a)).map(|(a, c)| (a.clone(), *c)).collect(),
        })
    }

    /// The order-`k` Taylor part.
    pub fn homogeneous_part(&self, k: u32) -> Polynomial {
        Polynomial {
            n: self.n,
            coeffs: self.coeffs.iter().filter(|(a, _)| a.order() == k).map(|(a, c)| (a.clone(), *c)).collect(),
        }
    }

    /// Evaluates the symmetric `m`-linear form of an `m`-homogeneous
    /// polynomial through the sign-average polarization formula
    /// `(1/(m!2^m)) Σ_ε ε_1⋯ε_m P(Σ ε_i z^{(i)})`.
    pub fn polarization_eval(&self, points: &[Vec<Complex64>]) -> Result<Complex64> {
        if !self.is_homogeneous() {
            return Err(Error::InvalidArgument("polarization needs a homogeneous polynomial".into()));
        }
        let m = self.degree().unwrap_or(points.len() as u32);
        if points.len() != m as usize {
            return Err(Error::InvalidArgument(format!("expected {m} points, got {}", points.len())));
        }
        if m > POLARIZATION_MAX_DEGREE {
            return Err(Error::InvalidArgument(format!("degree {m} exceeds the polarization guard {POLARIZATION_MAX_DEGREE}")));
        }
        if let Some(bad) = points.iter().find(|p| p.len() != self.n) {
            return Err(Error::DimensionMismatch { expected: self.n, got: bad.len() });
        }
        if m == 0 {
            return Ok(self.coefficient(&MultiIndex::zero(self.n)));
        }
        let mut acc = Complex64::new(0.0, 0.0);
        let mut z = vec![Complex64::new(0.0, 0.0); self.n];
        for mask in 0u32..(1 << m) {
            z.iter_mut().for_each(|v| *v = Complex64::new(0.0, 0.0));
            let mut sign = 1.0;
            for (i, pt) in points.iter().enumerate() {
                let s = if mask >> i & 1 == 1 { -1.0 } else { 1.0 };
                sign *= s;
                for (zk, pk) in z.iter_mut().zip(pt) {
                    *zk += pk * s;
                }
            }
            acc += self.evaluate(&z)? * sign;
        }
        let norm: f64 = (1..=m).map(f64::from).product::<f64>() * 2f64.powi(m as i32);
        Ok(acc / norm)
    }

    fn check_finite(&self) -> Result<()> {
        match self.coeffs.iter().find(|(_, c)| c.re.is_nan() || c.im.is_nan()) {
            Some((a, _)) => Err(Error::NanCoefficient(a.to_string())),
            None => Ok(()),
        }
    }
}

#[derive(Serialize, Deserialize)]
struct TermWire {
    alpha: MultiIndex,
    re: f64,
    im: f64,
}

impl Serialize for Polynomial {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let terms: Vec<TermWire> = self.coeffs.iter().map(|(a, c)| TermWire { alpha: a.clone(), re: c.re, im: c.im }).collect();
        terms.serialize(s)
    }
}

impl<'de> Deserialize<'de> for Polynomial {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let terms = Vec::<TermWire>::deserialize(d)?;
        let n = terms
            .first()
            .map(|t| t.alpha.dimension())
            .ok_or_else(|| D::Error::custom("an empty term list does not determine the dimension"))?;
        Polynomial::from_terms(n, terms.into_iter().map(|t| (t.alpha, Complex64::new(t.re, t.im)))).map_err(D::Error::custom)
    }
}

/// Flat term storage for repeated evaluation inside optimizers.
#[derive(Clone, Debug)]
pub(crate) struct Compiled {
    pub n: usize,
    /// Exponents, `n` per term.
    pub exps: Vec<u32>,
    pub coefs: Vec<Complex64>,
    pub homogeneous: bool,
}

impl Compiled {
    pub fn new(n: usize, terms: impl IntoIterator<Item = (MultiIndex, Complex64)>) -> Self {
        let mut exps = Vec::new();
        let mut coefs = Vec::new();
        let mut orders = Vec::new();
        for (a, c) in terms {
            exps.extend_from_slice(a.exponents());
            orders.push(a.order());
            coefs.push(c);
        }
        let homogeneous = orders.windows(2).all(|w| w[0] == w[1]);
        Compiled { n, exps, coefs, homogeneous }
    }

    pub fn from_poly(p: &Polynomial) -> Self {
        Self::new(p.n, p.coeffs.iter().map(|(a, c)| (a.clone(), *c)))
    }

    pub fn from_real(n: usize, terms: &[(MultiIndex, f64)]) -> Self {
        Self::new(n, terms.iter().map(|(a, c)| (a.clone(), Complex64::new(*c, 0.0))))
    }

    pub fn len(&self) -> usize {
        self.coefs.len()
    }

    pub fn term_exps(&self, t: usize) -> &[u32] {
        &self.exps[t * self.n..(t + 1) * self.n]
    }

    pub fn abs_coefs(&self) -> Vec<f64> {
        self.coefs.iter().map(|c| c.norm()).collect()
    }

    pub fn eval(&self, z: &[Complex64]) -> Complex64 {
        let mut acc = Complex64::new(0.0, 0.0);
        for t in 0..self.len() {
            let mut v = self.coefs[t];
            for (e, zi) in self.term_exps(t).iter().zip(z) {
                if *e > 0 {
                    v *= zi.powi(*e as i32);
                }
            }
            acc += v;
        }
        acc
    }

    /// Value and holomorphic gradient `∂P/∂z_k`.
    pub fn eval_grad(&self, z: &[Complex64], grad: &mut [Complex64]) -> Complex64 {
        grad.iter_mut().for_each(|g| *g = Complex64::new(0.0, 0.0));
        let mut acc = Complex64::new(0.0, 0.0);
        for t in 0..self.len() {
            let e = self.term_exps(t);
            let mut v = self.coefs[t];
            for (ek, zk) in e.iter().zip(z) {
                if *ek > 0 {
                    v *= zk.powi(*ek as i32);
                }
            }
            acc += v;
            for k in 0..self.n {
                if e[k] == 0 {
                    continue;
                }
                if z[k].norm() > 1e-150 {
                    grad[k] += v * (e[k] as f64) / z[k];
                } else if e[k] == 1 {
                    let mut w = self.coefs[t];
                    for (j, (ej, zj)) in e.iter().zip(z).enumerate() {
                        if j != k && *ej > 0 {
                            w *= zj.powi(*ej as i32);
                        }
                    }
                    grad[k] += w;
                }
            }
        }
        acc
    }
}

/// Certified bracket for `‖P‖ = sup_{z∈B_X} |P(z)|`.
///
/// The lower end is the best value found by multi-start projected ascent
/// (and, in dimension at most 2, by a certified branch-and-bound). The
/// upper end is the smallest proven bound among the characteristic majorant
/// `Σ |c_α|/c_X(α)` and the branch-and-bound cover.
pub fn sup_norm(p: &Polynomial, x: &LatticeSpec, budget: &Budget) -> Result<Bracket> {
    if p.dimension() != x.dimension() {
        return Err(Error::DimensionMismatch { expected: x.dimension(), got: p.dimension() });
    }
    p.check_finite()?;
    if p.is_empty() {
        return Ok(Bracket::exact(0.0, "zero polynomial").with_witness(vec![Complex64::new(0.0, 0.0); p.n]));
    }
    let compiled = Compiled::from_poly(p);
    let positive = p.is_nonnegative();
    let mut majorant = 0.0;
    let mut starts = Vec::new();
    let mut by_size: Vec<(&MultiIndex, &Complex64)> = p.terms().collect();
    by_size.sort_by(|a, b| b.1.norm().partial_cmp(&a.1.norm()).unwrap().then(a.0.cmp(b.0)));
    for (rank, (alpha, c)) in by_size.iter().enumerate() {
        let s = log_sup_monomial(alpha, x);
        majorant += c.norm() * s.upper.exp();
        if rank < 8 && !alpha.is_zero() {
            // align the phase of this term with the positive axis
            let shift = -c.arg() / alpha.order() as f64;
            starts.push(
                s.point
                    .iter()
                    .zip(alpha.exponents())
                    .map(|(&r, &e)| Complex64::from_polar(r, if e > 0 && !positive { shift } else { 0.0 }))
                    .collect(),
            );
        }
    }
    let spec = SearchSpec { poly: &compiled, lattice: x, positive, decreasing: positive && p.is_symmetric(), starts };
    let found = search::ascend(&spec, budget);
    let mut lo = found.value;
    let mut witness = found.point;
    let mut hi = majorant * (1.0 + 1e-12);
    let mut evals = found.evaluations;
    let mut method = String::from("projected ascent; characteristic majorant");
    if let Some(b) = certify::sup_bnb(&compiled, x, positive, (budget.tolerance * 100.0).max(1e-7), 200_000) {
        evals += b.cells;
        if b.lo > lo {
            lo = b.lo;
            witness = b.point;
        }
        if b.hi < hi {
            hi = b.hi;
            method = String::from("projected ascent; branch-and-bound cover");
        }
    }
    Ok(Bracket::new(lo, hi, method, evals).with_witness(witness))
}
