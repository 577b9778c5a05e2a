//! Multi-indices and finite index sets.
//!
//! A multi-index `α ∈ N_0^n` encodes the monomial `z^α = ∏ z_i^{α_i}`. Index
//! sets are described by a named generator (all indices of a given order,
//! square-free indices, even indices, indices with a prescribed support size)
//! or by an explicit list, and are enumerated in lexicographic order of the
//! exponent vectors.

use std::collections::BTreeSet;
use std::fmt;

use num_bigint::BigUint;
use num_traits::{One, ToPrimitive, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

/// Default maximal number of members an enumeration may produce.
pub const DEFAULT_ENUMERATION_CAP: u64 = 10_000_000;

/// Exponent vector of a monomial.
///
/// Ordering is lexicographic on the exponents, which is also the
/// enumeration order of every index set.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct MultiIndex(Vec<u32>);

impl MultiIndex {
    pub fn new(exponents: Vec<u32>) -> Self {
        MultiIndex(exponents)
    }

    /// The zero index of length `n` (the constant monomial).
    pub fn zero(n: usize) -> Self {
        MultiIndex(vec![0; n])
    }

    /// The unit index `e_k` scaled by `power`.
    pub fn axis(n: usize, k: usize, power: u32) -> Self {
        let mut e = vec![0; n];
        e[k] = power;
        MultiIndex(e)
    }

    pub fn exponents(&self) -> &[u32] {
        &self.0
    }

    pub fn dimension(&self) -> usize {
        self.0.len()
    }

    /// `|α| = Σ α_i`.
    pub fn order(&self) -> u32 {
        self.0.iter().sum()
    }

    pub fn support_size(&self) -> usize {
        self.0.iter().filter(|&&a| a > 0).count()
    }

    /// Positions of the nonzero exponents.
    pub fn support(&self) -> impl Iterator<Item = usize> + '_ {
        self.0.iter().enumerate().filter(|(_, &a)| a > 0).map(|(i, _)| i)
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|&a| a == 0)
    }

    /// Every exponent is 0 or 1.
    pub fn is_tetrahedral(&self) -> bool {
        self.0.iter().all(|&a| a <= 1)
    }

    /// Every exponent is even.
    pub fn is_even(&self) -> bool {
        self.0.iter().all(|&a| a % 2 == 0)
    }

    /// Exponents sorted in decreasing order, the canonical representative
    /// of the permutation class.
    pub fn sorted_decreasing(&self) -> Vec<u32> {
        let mut v = self.0.clone();
        v.sort_unstable_by(|a, b| b.cmp(a));
        v
    }

    /// Entrywise sum.
    ///
    /// # Panics
    /// Panics if the lengths differ.
    pub fn add(&self, other: &MultiIndex) -> MultiIndex {
        assert_eq!(self.dimension(), other.dimension(), "length mismatch");
        MultiIndex(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    /// Decrements coordinate `k`, or `None` if it is zero.
    pub fn decrement(&self, k: usize) -> Option<MultiIndex> {
        if self.0.get(k).copied().unwrap_or(0) == 0 {
            return None;
        }
        let mut v = self.0.clone();
        v[k] -= 1;
        Some(MultiIndex(v))
    }
}

impl fmt::Display for MultiIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, a) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{a}")?;
        }
        write!(f, ")")
    }
}

impl From<Vec<u32>> for MultiIndex {
    fn from(v: Vec<u32>) -> Self {
        MultiIndex(v)
    }
}

/// Named families of multi-indices.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Generator {
    /// `Λ(m,n)`: all indices of order `m`.
    Full(u32),
    /// All indices of order at most `m`, including the zero index.
    FullUpTo(u32),
    /// `Λ_T(m,n)`: square-free indices of order `m`.
    Tetra(u32),
    /// Square-free indices of order at most `m`, including the zero index.
    TetraUpTo(u32),
    /// `Λ_E(m,n)`: indices of order `m` with all exponents even.
    Even(u32),
    /// `Λ^L(m,n)`: indices of order `m` with exactly `l` nonzero entries.
    SupportLevel { m: u32, l: u32 },
    /// An explicit list, kept sorted and duplicate-free.
    Explicit(Vec<MultiIndex>),
}

impl Generator {
    /// Short lowercase name used in serialized output.
    pub fn name(&self) -> &'static str {
        match self {
            Generator::Full(_) => "full",
            Generator::FullUpTo(_) => "full_up_to",
            Generator::Tetra(_) => "tetra",
            Generator::TetraUpTo(_) => "tetra_up_to",
            Generator::Even(_) => "even",
            Generator::SupportLevel { .. } => "support_level",
            Generator::Explicit(_) => "explicit",
        }
    }
}

/// A finite index set `J ⊂ N_0^n`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IndexSetSpec {
    n: usize,
    generator: Generator,
}

impl IndexSetSpec {
    /// Builds a spec, validating the dimension and (for explicit lists)
    /// the member lengths. Explicit members are sorted and deduplicated.
    pub fn new(n: usize, generator: Generator) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidArgument("dimension must be positive".into()));
        }
        let generator = match generator {
            Generator::Explicit(list) => {
                if let Some(bad) = list.iter().find(|a| a.dimension() != n) {
                    return Err(Error::DimensionMismatch { expected: n, got: bad.dimension() });
                }
                let set: BTreeSet<MultiIndex> = list.into_iter().collect();
                Generator::Explicit(set.into_iter().collect())
            }
            g => g,
        };
        Ok(IndexSetSpec { n, generator })
    }

    fn unchecked(n: usize, generator: Generator) -> Self {
        assert!(n > 0, "dimension must be positive");
        IndexSetSpec { n, generator }
    }

    /// `Λ(m,n)`.
    pub fn full(n: usize, m: u32) -> Self {
        Self::unchecked(n, Generator::Full(m))
    }

    pub fn full_up_to(n: usize, m: u32) -> Self {
        Self::unchecked(n, Generator::FullUpTo(m))
    }

    /// `Λ_T(m,n)`.
    pub fn tetra(n: usize, m: u32) -> Self {
        Self::unchecked(n, Generator::Tetra(m))
    }

    pub fn tetra_up_to(n: usize, m: u32) -> Self {
        Self::unchecked(n, Generator::TetraUpTo(m))
    }

    /// `Λ_E(m,n)`.
    pub fn even(n: usize, m: u32) -> Self {
        Self::unchecked(n, Generator::Even(m))
    }

    /// `Λ^L(m,n)`.
    pub fn support_level(n: usize, m: u32, l: u32) -> Self {
        Self::unchecked(n, Generator::SupportLevel { m, l })
    }

    pub fn explicit(n: usize, members: Vec<MultiIndex>) -> Result<Self> {
        Self::new(n, Generator::Explicit(members))
    }

    pub fn dimension(&self) -> usize {
        self.n
    }

    pub fn generator(&self) -> &Generator {
        &self.generator
    }

    /// Compact label such as `full(2)` or `support_level(3,1)`.
    pub fn label(&self) -> String {
        match &self.generator {
            Generator::Full(m) | Generator::FullUpTo(m) | Generator::Tetra(m) | Generator::TetraUpTo(m) | Generator::Even(m) => {
                format!("{}({m})", self.generator.name())
            }
            Generator::SupportLevel { m, l } => format!("support_level({m},{l})"),
            Generator::Explicit(list) => {
                let parts: Vec<String> = list.iter().map(|a| a.to_string()).collect();
                format!("explicit[{}]", parts.join(";"))
            }
        }
    }

    /// Membership test without enumeration.
    pub fn contains(&self, alpha: &MultiIndex) -> bool {
        if alpha.dimension() != self.n {
            return false;
        }
        let m = alpha.order();
        match &self.generator {
            Generator::Full(k) => m == *k,
            Generator::FullUpTo(k) => m <= *k,
            Generator::Tetra(k) => m == *k && alpha.is_tetrahedral(),
            Generator::TetraUpTo(k) => m <= *k && alpha.is_tetrahedral(),
            Generator::Even(k) => m == *k && alpha.is_even(),
            Generator::SupportLevel { m: k, l } => m == *k && alpha.support_size() == *l as usize,
            Generator::Explicit(list) => list.binary_search(alpha).is_ok(),
        }
    }

    /// True when membership is invariant under coordinate permutations.
    pub fn is_symmetric(&self) -> bool {
        match &self.generator {
            Generator::Explicit(list) => {
                let set: BTreeSet<&MultiIndex> = list.iter().collect();
                list.iter().all(|a| {
                    let e = a.exponents();
                    (0..e.len()).all(|i| {
                        (i + 1..e.len()).all(|j| {
                            let mut v = e.to_vec();
                            v.swap(i, j);
                            set.contains(&MultiIndex(v))
                        })
                    })
                })
            }
            _ => true,
        }
    }

    /// Exact number of members.
    pub fn cardinality(&self) -> BigUint {
        cardinality(self)
    }

    /// Members, subject to the default enumeration cap.
    pub fn enumerate(&self) -> Result<Vec<MultiIndex>> {
        enumerate(self)
    }

    /// The homogeneous slice `J(k)`, expressed with the most specific
    /// generator available.
    pub fn slice(&self, k: u32) -> IndexSetSpec {
        let n = self.n;
        let empty = || IndexSetSpec::unchecked(n, Generator::Explicit(Vec::new()));
        match &self.generator {
            Generator::Full(m) if *m == k => self.clone(),
            Generator::FullUpTo(m) if k <= *m => IndexSetSpec::full(n, k),
            Generator::Tetra(m) if *m == k => self.clone(),
            Generator::TetraUpTo(m) if k <= *m => IndexSetSpec::tetra(n, k),
            Generator::Even(m) if *m == k => self.clone(),
            Generator::SupportLevel { m, .. } if *m == k => self.clone(),
            Generator::Explicit(list) => {
                IndexSetSpec::unchecked(n, Generator::Explicit(list.iter().filter(|a| a.order() == k).cloned().collect()))
            }
            _ => empty(),
        }
    }

    /// Largest order that may occur in the set (an upper bound for explicit
    /// lists is their actual maximum).
    pub fn max_order(&self) -> u32 {
        match &self.generator {
            Generator::Full(m) | Generator::FullUpTo(m) | Generator::Even(m) | Generator::SupportLevel { m, .. } => *m,
            Generator::Tetra(m) | Generator::TetraUpTo(m) => (*m).min(self.n as u32),
            Generator::Explicit(list) => list.iter().map(|a| a.order()).max().unwrap_or(0),
        }
    }

    /// True for generators whose members all share one order.
    pub fn is_homogeneous(&self) -> bool {
        match &self.generator {
            Generator::FullUpTo(m) | Generator::TetraUpTo(m) => *m == 0,
            Generator::Explicit(list) => list.windows(2).all(|w| w[0].order() == w[1].order()),
            _ => true,
        }
    }

    /// True when every member is square-free and of order `m`.
    pub fn is_tetrahedral_of_order(&self, m: u32) -> Result<bool> {
        Ok(match &self.generator {
            Generator::Tetra(k) => *k == m,
            _ => self.enumerate()?.iter().all(|a| a.is_tetrahedral() && a.order() == m),
        })
    }
}

impl fmt::Display for IndexSetSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} n={}", self.label(), self.n)
    }
}

#[derive(Serialize, Deserialize)]
#[serde(untagged)]
enum Param {
    Int(u32),
    Index(MultiIndex),
}

#[derive(Serialize, Deserialize)]
struct IndexSetWire {
    n: usize,
    generator: String,
    params: Vec<Param>,
}

impl Serialize for IndexSetSpec {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let params = match &self.generator {
            Generator::Full(m) | Generator::FullUpTo(m) | Generator::Tetra(m) | Generator::TetraUpTo(m) | Generator::Even(m) => {
                vec![Param::Int(*m)]
            }
            Generator::SupportLevel { m, l } => vec![Param::Int(*m), Param::Int(*l)],
            Generator::Explicit(list) => list.iter().cloned().map(Param::Index).collect(),
        };
        IndexSetWire { n: self.n, generator: self.generator.name().to_string(), params }.serialize(s)
    }
}

impl<'de> Deserialize<'de> for IndexSetSpec {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        use serde::de::Error as _;
        let wire = IndexSetWire::deserialize(d)?;
        let ints: Vec<u32> = wire
            .params
            .iter()
            .filter_map(|p| match p {
                Param::Int(v) => Some(*v),
                Param::Index(_) => None,
            })
            .collect();
        let one = |name: &str| -> std::result::Result<u32, D::Error> {
            match ints.as_slice() {
                [m] => Ok(*m),
                _ => Err(D::Error::custom(format!("{name} expects one integer parameter"))),
            }
        };
        let generator = match wire.generator.as_str() {
            "full" => Generator::Full(one("full")?),
            "full_up_to" => Generator::FullUpTo(one("full_up_to")?),
            "tetra" => Generator::Tetra(one("tetra")?),
            "tetra_up_to" => Generator::TetraUpTo(one("tetra_up_to")?),
            "even" => Generator::Even(one("even")?),
            "support_level" => match ints.as_slice() {
                [m, l] => Generator::SupportLevel { m: *m, l: *l },
                _ => return Err(D::Error::custom("support_level expects [m, L]")),
            },
            "explicit" => Generator::Explicit(
                wire.params
                    .into_iter()
                    .map(|p| match p {
                        Param::Index(a) => Ok(a),
                        Param::Int(_) => Err(D::Error::custom("explicit expects index arrays")),
                    })
                    .collect::<std::result::Result<_, _>>()?,
            ),
            other => return Err(D::Error::custom(format!("unknown generator {other}"))),
        };
        IndexSetSpec::new(wire.n, generator).map_err(D::Error::custom)
    }
}

/// Binomial coefficient `C(n, k)` (zero when `k > n`).
pub fn binomial(n: u64, k: u64) -> BigUint {
    if k > n {
        return BigUint::zero();
    }
    let k = k.min(n - k);
    let mut acc = BigUint::one();
    for i in 0..k {
        acc *= n - i;
        acc /= i + 1;
    }
    acc
}

/// Exact number of members of `spec`.
pub fn cardinality(spec: &IndexSetSpec) -> BigUint {
    let n = spec.n as u64;
    match &spec.generator {
        Generator::Full(m) => binomial(n + *m as u64 - 1, *m as u64),
        Generator::FullUpTo(m) => binomial(n + *m as u64, *m as u64),
        Generator::Tetra(m) => binomial(n, *m as u64),
        Generator::TetraUpTo(m) => (0..=(*m as u64).min(n)).map(|k| binomial(n, k)).sum(),
        Generator::Even(m) => {
            if m % 2 == 1 {
                BigUint::zero()
            } else {
                let h = (*m / 2) as u64;
                binomial(n + h - 1, h)
            }
        }
        Generator::SupportLevel { m, l } => {
            let (m, l) = (*m as u64, *l as u64);
            if l == 0 {
                if m == 0 {
                    BigUint::one()
                } else {
                    BigUint::zero()
                }
            } else if m < l {
                BigUint::zero()
            } else {
                // choose the support, then a composition of m into l positive parts
                binomial(n, l) * binomial(m - 1, l - 1)
            }
        }
        Generator::Explicit(list) => BigUint::from(list.len()),
    }
}

/// Members of `spec` in lexicographic order, with the default cap.
pub fn enumerate(spec: &IndexSetSpec) -> Result<Vec<MultiIndex>> {
    enumerate_capped(spec, DEFAULT_ENUMERATION_CAP)
}

/// Members of `spec` in lexicographic order.
///
/// Fails with [`Error::CapacityExceeded`] when the exact cardinality
/// exceeds `cap`.
pub fn enumerate_capped(spec: &IndexSetSpec, cap: u64) -> Result<Vec<MultiIndex>> {
    let count = cardinality(spec);
    if count > BigUint::from(cap) {
        return Err(Error::CapacityExceeded { what: spec.to_string(), count: count.to_string(), cap });
    }
    if let Generator::Explicit(list) = &spec.generator {
        return Ok(list.clone());
    }
    let rule = Rule::of(&spec.generator);
    let mut out = Vec::with_capacity(count.to_usize().unwrap_or(0));
    let mut current = vec![0u32; spec.n];
    walk(&rule, 0, rule.total, 0, &mut current, &mut out);
    Ok(out)
}

/// Constraints shared by the generator-based families.
struct Rule {
    total: u32,
    exact_total: bool,
    max_entry: u32,
    step: u32,
    support: Option<u32>,
}

impl Rule {
    fn of(g: &Generator) -> Rule {
        let base = |total, exact_total| Rule { total, exact_total, max_entry: u32::MAX, step: 1, support: None };
        match g {
            Generator::Full(m) => base(*m, true),
            Generator::FullUpTo(m) => base(*m, false),
            Generator::Tetra(m) => Rule { max_entry: 1, ..base(*m, true) },
            Generator::TetraUpTo(m) => Rule { max_entry: 1, ..base(*m, false) },
            Generator::Even(m) => Rule { step: 2, ..base(*m, true) },
            Generator::SupportLevel { m, l } => Rule { support: Some(*l), ..base(*m, true) },
            Generator::Explicit(_) => unreachable!("explicit lists are not walked"),
        }
    }
}

fn walk(rule: &Rule, pos: usize, remaining: u32, used: u32, cur: &mut [u32], out: &mut Vec<MultiIndex>) {
    let n = cur.len();
    let left = (n - pos) as u64;
    if rule.exact_total {
        if rule.max_entry != u32::MAX && (remaining as u64) > left * rule.max_entry as u64 {
            return;
        }
        if !remaining.is_multiple_of(rule.step) {
            return;
        }
    }
    if let Some(l) = rule.support {
        if used > l || (l - used) as u64 > left {
            return;
        }
    }
    if pos == n {
        let done = !rule.exact_total || remaining == 0;
        let support_ok = rule.support.is_none_or(|l| used == l);
        if done && support_ok {
            out.push(MultiIndex(cur.to_vec()));
        }
        return;
    }
    let top = remaining.min(rule.max_entry);
    let mut e = 0;
    while e <= top {
        cur[pos] = e;
        walk(rule, pos + 1, remaining - e, used + u32::from(e > 0), cur, out);
        e += rule.step;
    }
    cur[pos] = 0;
}

/// `|[α]| = m!/α!`, the number of ordered `m`-tuples representing `α`.
pub fn class_size(alpha: &MultiIndex) -> BigUint {
    let mut acc = BigUint::one();
    let mut partial = 0u64;
    for &a in alpha.exponents() {
        partial += a as u64;
        acc *= binomial(partial, a as u64);
    }
    acc
}

/// `ln |[α]|` in floating point.
pub fn ln_class_size(alpha: &MultiIndex) -> f64 {
    let m = alpha.order() as f64;
    statrs::function::gamma::ln_gamma(m + 1.0)
        - alpha.exponents().iter().map(|&a| statrs::function::gamma::ln_gamma(a as f64 + 1.0)).sum::<f64>()
}

/// The reduced set `J^♭`: all indices of order `m−1` reachable from a member
/// of the `m`-homogeneous set `J` by decrementing one positive coordinate.
///
/// `Λ(m,n)^♭` is returned with the `Full(m−1)` generator; every other input
/// yields an explicit list.
pub fn reduce(j: &IndexSetSpec) -> Result<IndexSetSpec> {
    if let Generator::Full(m) = j.generator {
        if m == 0 {
            return Err(Error::InvalidArgument("cannot reduce an order-0 set".into()));
        }
        return Ok(IndexSetSpec::full(j.n, m - 1));
    }
    let members = j.enumerate()?;
    let order = homogeneous_order(&members)?;
    if order == Some(0) {
        return Err(Error::InvalidArgument("cannot reduce an order-0 set".into()));
    }
    let mut set = BTreeSet::new();
    for beta in &members {
        for k in 0..j.n {
            if let Some(alpha) = beta.decrement(k) {
                set.insert(alpha);
            }
        }
    }
    IndexSetSpec::explicit(j.n, set.into_iter().collect())
}

/// The same reduction computed in j-mode: drop one entry of each
/// nondecreasing tuple `j ∈ 𝒥(m,n)`.
pub fn reduce_jmode(j: &IndexSetSpec) -> Result<IndexSetSpec> {
    let members = j.enumerate()?;
    if homogeneous_order(&members)? == Some(0) {
        return Err(Error::InvalidArgument("cannot reduce an order-0 set".into()));
    }
    let mut set = BTreeSet::new();
    for beta in &members {
        let tuple = jmode(beta);
        for drop in 0..tuple.len() {
            let shorter: Vec<usize> = tuple.iter().enumerate().filter(|&(i, _)| i != drop).map(|(_, &v)| v).collect();
            set.insert(jmode_inverse(&shorter, j.n)?);
        }
    }
    IndexSetSpec::explicit(j.n, set.into_iter().collect())
}

fn homogeneous_order(members: &[MultiIndex]) -> Result<Option<u32>> {
    let mut order = None;
    for a in members {
        let m = a.order();
        match order {
            None => order = Some(m),
            Some(o) if o != m => return Err(Error::MixedOrders(o, m)),
            _ => {}
        }
    }
    Ok(order)
}

/// Splits `α` into its tetrahedral part (ones at the odd entries) and its
/// even part `α − α_T`.
pub fn parity_split(alpha: &MultiIndex) -> (MultiIndex, MultiIndex) {
    let t: Vec<u32> = alpha.exponents().iter().map(|a| a % 2).collect();
    let e: Vec<u32> = alpha.exponents().iter().map(|a| a - a % 2).collect();
    (MultiIndex(t), MultiIndex(e))
}

/// The nondecreasing tuple `(1,…,1,2,…,2,…)` with `k` repeated `α_k` times
/// (1-based coordinates).
pub fn jmode(alpha: &MultiIndex) -> Vec<usize> {
    alpha.exponents().iter().enumerate().flat_map(|(k, &a)| std::iter::repeat_n(k + 1, a as usize)).collect()
}

/// Inverse of [`jmode`] for tuples with entries in `1..=n`.
pub fn jmode_inverse(j: &[usize], n: usize) -> Result<MultiIndex> {
    let mut exps = vec![0u32; n];
    for (i, &v) in j.iter().enumerate() {
        if v == 0 || v > n {
            return Err(Error::InvalidArgument(format!("j-mode entry {v} outside 1..={n}")));
        }
        if i > 0 && j[i - 1] > v {
            return Err(Error::InvalidArgument("j-mode tuple must be nondecreasing".into()));
        }
        exps[v - 1] += 1;
    }
    Ok(MultiIndex(exps))
}
