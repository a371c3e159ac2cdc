//! Closed-form cycle counts from class numbers.
//!
//! For fixed `(ℓ, r)` the relevant orders are those whose prime above `ℓ`
//! has class-group order dividing (or equal to) `r`. Their discriminants,
//! class numbers and genus data give the total number of directed `r`-cycles
//! (`n_t`) and the number meeting the spine (`n_s`) for every prime `p` past
//! the Kaneko bound.

use std::fmt;

use num_bigint::BigUint;
use num_rational::Ratio;
use thiserror::Error;

use crate::arith::{divisors, factorize, is_prime, kronecker, moebius, FactorList};
use crate::quadforms::{self, Discriminant, QuadError};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PredictError {
    #[error("p = {p} does not exceed |D| = {d}; the root-count criteria do not apply")]
    BoundViolation { d: u64, p: u64 },
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("p must differ from l = {0}")]
    PrimeEqualsEll(u64),
    #[error("cycle length must be at least 1")]
    ZeroLength,
    #[error(transparent)]
    Quad(#[from] QuadError),
    #[error("internal consistency check failed: {0}")]
    Inconsistent(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum SetMode {
    /// Order of the prime above `ℓ` divides `r`.
    Dividing,
    /// Order of the prime above `ℓ` is exactly `r`.
    Exact,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DiscriminantSet {
    pub ell: u64,
    pub r: u32,
    pub mode: SetMode,
    /// Sorted by increasing value, i.e. largest `|D|` first.
    pub discs: Vec<Discriminant>,
}

impl DiscriminantSet {
    pub fn len(&self) -> usize {
        self.discs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.discs.is_empty()
    }

    pub fn values(&self) -> Vec<i64> {
        self.discs.iter().map(|d| d.value()).collect()
    }

    pub fn max_abs(&self) -> u64 {
        self.discs.iter().map(|d| d.abs()).max().unwrap_or(0)
    }
}

impl fmt::Display for DiscriminantSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let body: Vec<String> = self.discs.iter().map(|d| d.value().to_string()).collect();
        write!(f, "{{{}}}", body.join(","))
    }
}

fn check_ell(ell: u64) -> Result<(), PredictError> {
    if is_prime(ell) {
        Ok(())
    } else {
        Err(PredictError::NotPrime(ell))
    }
}

/// `{ (x^2 - 4ℓ^r)/f^2 : 0 < x < 2ℓ^{r/2}, ℓ ∤ x, f^2 | x^2 - 4ℓ^r, quotient ≡ 0,1 mod 4 }`.
pub fn disc_set_dividing(ell: u64, r: u32) -> Result<DiscriminantSet, PredictError> {
    check_ell(ell)?;
    if r == 0 {
        return Err(PredictError::ZeroLength);
    }
    let four_lr = 4 * (ell as i64).pow(r);
    let mut discs = Vec::new();
    let mut x = 1i64;
    while x * x < four_lr {
        if x % ell as i64 != 0 {
            let n = x * x - four_lr;
            let mut square_part = 1u64;
            for (q, e) in factorize(n.unsigned_abs()).0 {
                square_part *= q.pow(e / 2);
            }
            for f in divisors(square_part) {
                let cand = n / (f * f) as i64;
                if let Ok(d) = Discriminant::new(cand) {
                    discs.push(d);
                }
            }
        }
        x += 1;
    }
    discs.sort_by_key(|d| d.value());
    discs.dedup();
    Ok(DiscriminantSet {
        ell,
        r,
        mode: SetMode::Dividing,
        discs,
    })
}

/// Members of the dividing set whose prime form above `ℓ` has order exactly `r`.
pub fn disc_set_exact(ell: u64, r: u32) -> Result<DiscriminantSet, PredictError> {
    let dividing = disc_set_dividing(ell, r)?;
    let mut discs = Vec::with_capacity(dividing.len());
    for d in dividing.discs {
        let f = quadforms::prime_form(d, ell)?;
        if quadforms::form_order(&f, d) == r as u64 {
            discs.push(d);
        }
    }
    Ok(DiscriminantSet {
        ell,
        r,
        mode: SetMode::Exact,
        discs,
    })
}

/// Exact-order set by removing every proper divisor's dividing set.
pub fn disc_set_exact_by_difference(ell: u64, r: u32) -> Result<DiscriminantSet, PredictError> {
    let dividing = disc_set_dividing(ell, r)?;
    let mut smaller = Vec::new();
    for k in divisors(r as u64).into_iter().filter(|&k| k < r as u64) {
        smaller.extend(disc_set_dividing(ell, k as u32)?.discs);
    }
    let discs = dividing
        .discs
        .into_iter()
        .filter(|d| !smaller.contains(d))
        .collect();
    Ok(DiscriminantSet {
        ell,
        r,
        mode: SetMode::Exact,
        discs,
    })
}

/// `M_{ℓ,r}` and, for even `r`, the strong bound over all shorter lengths.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct KanekoBound {
    pub ell: u64,
    pub r: u32,
    pub m: Ratio<u64>,
    pub m_strong: Option<Ratio<u64>>,
}

impl KanekoBound {
    /// Threshold above which the formula counts are exact.
    pub fn operative(&self) -> Ratio<u64> {
        match self.m_strong {
            Some(s) if s > self.m => s,
            _ => self.m,
        }
    }

    pub fn exceeded_by(&self, p: u64) -> bool {
        Ratio::from_integer(p) > self.operative()
    }
}

/// `max(4, max d1·d2/4)` over pairs of distinct members of the exact-order set.
fn single_bound(set: &DiscriminantSet) -> Ratio<u64> {
    let mut best = Ratio::from_integer(4);
    for (i, d1) in set.discs.iter().enumerate() {
        for d2 in &set.discs[i + 1..] {
            let cand = Ratio::new(d1.abs() * d2.abs(), 4);
            if cand > best {
                best = cand;
            }
        }
    }
    best
}

pub fn kaneko_bound(ell: u64, r: u32) -> Result<KanekoBound, PredictError> {
    let m = single_bound(&disc_set_exact(ell, r)?);
    let m_strong = if r % 2 == 0 {
        let mut best = Ratio::from_integer(4);
        for ri in 1..r {
            best = best.max(single_bound(&disc_set_exact(ell, ri)?));
        }
        Some(best)
    } else {
        None
    };
    Ok(KanekoBound {
        ell,
        r,
        m,
        m_strong,
    })
}

/// Whether `p` is inert in `O_D` and the reduced Hilbert class polynomial of
/// `O_D` has an `F_p` root.
pub fn delta_p(d: Discriminant, p: u64) -> Result<bool, PredictError> {
    if p <= d.abs() {
        return Err(PredictError::BoundViolation { d: d.abs(), p });
    }
    Ok(residue_has_spine_roots(d, p))
}

/// The root-count criteria evaluated on any positive residue `m` coprime to
/// `D`; they depend only on `m mod 8` and `m mod q` for odd `q | D`.
fn residue_has_spine_roots(d: Discriminant, m: u64) -> bool {
    let dv = d.value();
    if kronecker(dv, m) != -1 {
        return false;
    }
    let factors = factorize(d.abs());
    for q in factors.primes() {
        if q == 2 {
            let m8 = (m % 8) as i64;
            let ok = m8 == 7
                || matches!((-m8 + dv / 4).rem_euclid(8), 0 | 1 | 4)
                || (-m8 + dv).rem_euclid(8) == 1;
            if !ok {
                return false;
            }
        } else {
            let neg = (q - m % q) % q;
            if kronecker(neg as i64, q) != 1 {
                return false;
            }
        }
    }
    true
}

pub fn is_power_of_two(r: u32) -> bool {
    r.is_power_of_two()
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SpinePrediction {
    pub p: u64,
    pub ell: u64,
    pub r: u32,
    pub n_s: u64,
    pub n_t: u64,
    /// `p` exceeds the operative Kaneko bound.
    pub valid: bool,
    /// `r` is a power of two; the spine count is conjectural.
    pub experimental: bool,
}

#[derive(Debug, Clone, PartialEq, Eq)]
struct ExactMember {
    disc: Discriminant,
    class_number: u64,
    h2: u64,
}

/// Precomputed discriminant data for one `(ℓ, r)`, shared across primes.
#[derive(Debug, Clone)]
pub struct Predictor {
    ell: u64,
    r: u32,
    /// `(μ(d), dividing set for r/d)` over divisors `d` of `r` with `μ(d) ≠ 0`.
    mobius_terms: Vec<(i8, Vec<(Discriminant, u64)>)>,
    exact: Vec<ExactMember>,
    max_abs: u64,
    bound: KanekoBound,
}

impl Predictor {
    pub fn new(ell: u64, r: u32) -> Result<Self, PredictError> {
        let mut mobius_terms = Vec::new();
        for d in divisors(r as u64) {
            let mu = moebius(d);
            if mu == 0 {
                continue;
            }
            let set = disc_set_dividing(ell, (r as u64 / d) as u32)?;
            let members = set.discs.iter().map(|&x| (x, quadforms::h2(x))).collect();
            mobius_terms.push((mu, members));
        }
        let exact = disc_set_exact(ell, r)?
            .discs
            .into_iter()
            .map(|disc| ExactMember {
                disc,
                class_number: quadforms::class_number(disc),
                h2: quadforms::h2(disc),
            })
            .collect();
        let max_abs = disc_set_dividing(ell, r)?.max_abs();
        Ok(Self {
            ell,
            r,
            mobius_terms,
            exact,
            max_abs,
            bound: kaneko_bound(ell, r)?,
        })
    }

    pub fn ell(&self) -> u64 {
        self.ell
    }

    pub fn r(&self) -> u32 {
        self.r
    }

    pub fn bound(&self) -> &KanekoBound {
        &self.bound
    }

    pub fn exact_discriminants(&self) -> Vec<Discriminant> {
        self.exact.iter().map(|m| m.disc).collect()
    }

    /// Largest `|D|` entering any formula; `p` must exceed it.
    pub fn max_abs_discriminant(&self) -> u64 {
        self.max_abs
    }

    /// Spine cycles per `δ·h₂` unit: 2 for odd `r` (both directions of a
    /// cycle with one spine vertex), 1 for even `r` (two spine vertices per cycle).
    fn spine_weight(&self) -> i64 {
        if self.r % 2 == 1 {
            2
        } else {
            1
        }
    }

    pub fn predict(&self, p: u64) -> Result<SpinePrediction, PredictError> {
        if !is_prime(p) {
            return Err(PredictError::NotPrime(p));
        }
        if p == self.ell {
            return Err(PredictError::PrimeEqualsEll(p));
        }
        if p <= self.max_abs {
            return Err(PredictError::BoundViolation { d: self.max_abs, p });
        }
        let mut signed = 0i64;
        for (mu, members) in &self.mobius_terms {
            let mut inner = 0i64;
            for &(d, h2) in members {
                if delta_p(d, p)? {
                    inner += h2 as i64;
                }
            }
            signed += *mu as i64 * inner;
        }
        let n_s = u64::try_from(self.spine_weight() * signed)
            .map_err(|_| PredictError::Inconsistent(format!("negative spine count at p = {p}")))?;
        let n_t = self
            .exact
            .iter()
            .filter(|m| kronecker(m.disc.value(), p) == -1)
            .map(|m| 2 * m.class_number / self.r as u64)
            .sum();
        Ok(SpinePrediction {
            p,
            ell: self.ell,
            r: self.r,
            n_s,
            n_t,
            valid: self.bound.exceeded_by(p),
            experimental: is_power_of_two(self.r),
        })
    }

    /// Cesàro limit of `n_s` over consecutive primes.
    pub fn average_limit(&self) -> Result<AverageLimit, PredictError> {
        let total: i64 = self
            .mobius_terms
            .iter()
            .map(|(mu, members)| *mu as i64 * members.len() as i64)
            .sum();
        let value = if self.r % 2 == 0 {
            Ratio::new(total, 2)
        } else {
            Ratio::from_integer(total)
        };
        if crate::arith::factorize(self.r as u64).0 == [(self.r as u64, 1)] {
            let shortcut = prime_length_limit(self.ell, self.r)?;
            let expected = if self.r == 2 { shortcut / 2 } else { shortcut };
            if expected != value {
                return Err(PredictError::Inconsistent(format!(
                    "Möbius limit {value} differs from prime-length count {expected}"
                )));
            }
        }
        Ok(AverageLimit {
            value,
            conjectural: is_power_of_two(self.r),
        })
    }

    /// Residue-class table of `(n_s, n_t)` modulo `lcm(8, |d_1|, …, |d_k|)`.
    pub fn residue_census(&self) -> ResidueCensus {
        let mut modulus = factorize(8);
        for m in &self.exact {
            modulus = lcm_factored(&modulus, &factorize(m.disc.abs()));
        }
        ResidueCensus {
            ell: self.ell,
            r: self.r,
            modulus,
            members: self.exact.clone(),
            spine_weight: self.spine_weight() as u64,
            experimental: is_power_of_two(self.r),
        }
    }
}

pub fn predict(ell: u64, r: u32, p: u64) -> Result<SpinePrediction, PredictError> {
    Predictor::new(ell, r)?.predict(p)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct AverageLimit {
    pub value: Ratio<i64>,
    /// `r` is a power of two.
    pub conjectural: bool,
}

impl AverageLimit {
    pub fn as_f64(&self) -> f64 {
        *self.value.numer() as f64 / *self.value.denom() as f64
    }
}

pub fn average_limit(ell: u64, r: u32) -> Result<AverageLimit, PredictError> {
    Predictor::new(ell, r)?.average_limit()
}

/// For prime `r` the limit collapses to the size of the exact-order set.
pub fn prime_length_limit(ell: u64, r: u32) -> Result<Ratio<i64>, PredictError> {
    Ok(Ratio::from_integer(disc_set_exact(ell, r)?.len() as i64))
}

fn lcm_factored(a: &FactorList, b: &FactorList) -> FactorList {
    let mut primes: Vec<u64> = a.primes().chain(b.primes()).collect();
    primes.sort_unstable();
    primes.dedup();
    FactorList(
        primes
            .into_iter()
            .map(|q| (q, a.exponent_of(q).max(b.exponent_of(q))))
            .collect(),
    )
}

/// `(n_s, n_t)` as a function of `p mod M` for primes past the bound.
#[derive(Debug, Clone)]
pub struct ResidueCensus {
    pub ell: u64,
    pub r: u32,
    modulus: FactorList,
    members: Vec<ExactMember>,
    spine_weight: u64,
    pub experimental: bool,
}

impl ResidueCensus {
    pub fn modulus_factors(&self) -> &FactorList {
        &self.modulus
    }

    /// The modulus, which can exceed 128 bits for larger `(ℓ, r)`.
    pub fn modulus(&self) -> BigUint {
        self.modulus
            .0
            .iter()
            .fold(BigUint::from(1u32), |acc, &(q, e)| {
                acc * BigUint::from(q).pow(e)
            })
    }

    pub fn modulus_u128(&self) -> Option<u128> {
        self.modulus.0.iter().try_fold(1u128, |acc, &(q, e)| {
            acc.checked_mul((q as u128).checked_pow(e)?)
        })
    }

    pub fn is_coprime(&self, m: u64) -> bool {
        self.modulus.primes().all(|q| m % q != 0)
    }

    /// Reduce a prime (or any positive integer) to its residue class.
    pub fn residue_of(&self, p: u64) -> u64 {
        match self.modulus_u128() {
            Some(m) if (p as u128) >= m => (p as u128 % m) as u64,
            _ => p,
        }
    }

    /// Table entry for a residue `m`; `None` when `m` shares a factor with the modulus.
    ///
    /// Each exact-order discriminant contributes `2h/r` cycles when `m` is a
    /// nonresidue class for it, and its genus-many spine cycles when the
    /// root-count congruences also hold.
    pub fn entry(&self, m: u64) -> Option<(u64, u64)> {
        if m == 0 || !self.is_coprime(m) {
            return None;
        }
        let mut n_s = 0;
        let mut n_t = 0;
        for member in &self.members {
            if kronecker(member.disc.value(), m) != -1 {
                continue;
            }
            n_t += 2 * member.class_number / self.r as u64;
            if residue_has_spine_roots(member.disc, m) {
                n_s += self.spine_weight * member.h2;
            }
        }
        Some((n_s, n_t))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn dividing_sets_from_examples() {
        assert_eq!(
            disc_set_dividing(3, 3).unwrap().values(),
            vec![-107, -104, -92, -83, -59, -44, -23, -11, -8]
        );
        assert_eq!(disc_set_dividing(3, 1).unwrap().values(), vec![-11, -8]);
        assert_eq!(disc_set_dividing(2, 1).unwrap().values(), vec![-7]);
    }

    #[test]
    fn exact_sets() {
        assert_eq!(
            disc_set_exact(3, 3).unwrap().values(),
            vec![-107, -104, -92, -83, -59, -44, -23]
        );
        assert_eq!(disc_set_exact(3, 1).unwrap().values(), vec![-11, -8]);
        assert_eq!(
            disc_set_exact(3, 3).unwrap().to_string(),
            "{-107,-104,-92,-83,-59,-44,-23}"
        );
    }

    #[test]
    fn exact_set_constructions_agree() {
        for ell in [2, 3, 5] {
            for r in 1..=8 {
                assert_eq!(
                    disc_set_exact(ell, r).unwrap().discs,
                    disc_set_exact_by_difference(ell, r).unwrap().discs,
                    "l={ell} r={r}"
                );
            }
        }
    }

    #[test]
    fn dividing_members_have_dividing_order() {
        for ell in [2, 3, 5, 7] {
            for r in 1..=5 {
                for d in disc_set_dividing(ell, r).unwrap().discs {
                    assert_ne!(d.conductor() % ell, 0);
                    let f = quadforms::prime_form(d, ell).unwrap();
                    assert_eq!(r as u64 % quadforms::form_order(&f, d), 0);
                }
            }
        }
    }

    #[test]
    fn kaneko_bounds() {
        assert_eq!(kaneko_bound(3, 3).unwrap().m, Ratio::from_integer(2782));
        assert_eq!(kaneko_bound(5, 3).unwrap().m, Ratio::from_integer(61876));
        // a single discriminant gives the floor value
        let b = kaneko_bound(2, 1).unwrap();
        assert_eq!(b.m, Ratio::from_integer(4));
        assert!(b.m_strong.is_none());
        let even = kaneko_bound(2, 6).unwrap();
        assert!(even.m_strong.is_some());
        assert!(even.operative() >= even.m);
    }

    #[test]
    fn strong_bound_dominates_shorter_lengths() {
        for (ell, r) in [(2u64, 6u32), (3, 4), (2, 4), (3, 6)] {
            let b = kaneko_bound(ell, r).unwrap();
            for ri in 1..r {
                assert!(b.m_strong.unwrap() >= kaneko_bound(ell, ri).unwrap().m);
            }
        }
    }

    #[test]
    fn delta_at_worked_prime() {
        let d = |v| Discriminant::new(v).unwrap();
        assert!(delta_p(d(-23), 4643).unwrap());
        assert!(!delta_p(d(-104), 4643).unwrap());
        assert!(delta_p(d(-92), 4643).unwrap());
        assert_eq!(
            delta_p(d(-104), 103),
            Err(PredictError::BoundViolation { d: 104, p: 103 })
        );
    }

    #[test]
    fn prediction_at_worked_prime() {
        let pred = predict(3, 3, 4643).unwrap();
        assert_eq!((pred.n_s, pred.n_t), (4, 8));
        assert!(pred.valid);
        assert!(!pred.experimental);
    }

    #[test]
    fn prediction_refuses_small_primes() {
        assert!(matches!(
            predict(3, 3, 101),
            Err(PredictError::BoundViolation { .. })
        ));
        let below = predict(3, 3, 1009).unwrap();
        assert!(!below.valid);
        assert_eq!(predict(3, 3, 4641), Err(PredictError::NotPrime(4641)));
    }

    #[test]
    fn empty_spine_residues_exist() {
        let pred = Predictor::new(3, 3).unwrap();
        let zero = crate::arith::primes_between(2789, 20_000)
            .into_iter()
            .map(|p| pred.predict(p).unwrap())
            .find(|x| x.n_s == 0 && x.n_t > 0);
        assert!(zero.is_some());
    }

    #[test]
    fn averages() {
        let lim = average_limit(3, 3).unwrap();
        assert_eq!(lim.value, Ratio::from_integer(7));
        assert!(!lim.conjectural);
        assert_eq!(prime_length_limit(3, 3).unwrap(), Ratio::from_integer(7));
        let lim5 = average_limit(5, 3).unwrap();
        assert_eq!(
            lim5.value,
            Ratio::from_integer(disc_set_exact(5, 3).unwrap().len() as i64)
        );
        assert!(average_limit(3, 4).unwrap().conjectural);
    }

    #[test]
    fn moebius_consistency() {
        for ell in [2, 3, 5] {
            for r in 1..=8u32 {
                let total: usize = divisors(r as u64)
                    .into_iter()
                    .map(|d| disc_set_exact(ell, d as u32).unwrap().len())
                    .sum();
                assert_eq!(total, disc_set_dividing(ell, r).unwrap().len());
            }
        }
    }

    #[test]
    fn residue_modulus() {
        let census = Predictor::new(3, 3).unwrap().residue_census();
        assert_eq!(census.modulus_u128(), Some(13_786_935_448));
        assert_eq!(census.modulus().to_string(), "13786935448");
        assert_eq!(census.entry(4643), Some((4, 8)));
        assert_eq!(census.entry(23), None);
    }

    #[test]
    fn residue_census_matches_pointwise_formula() {
        for (ell, r) in [(3u64, 3u32), (2, 3), (2, 5), (5, 3), (3, 1), (2, 6)] {
            let pred = Predictor::new(ell, r).unwrap();
            let census = pred.residue_census();
            let lo = (*pred.bound().operative().numer() / *pred.bound().operative().denom())
                .max(pred.max_abs_discriminant())
                + 1;
            for p in crate::arith::primes_between(lo, 10_000) {
                if p == ell {
                    continue;
                }
                let x = pred.predict(p).unwrap();
                assert_eq!(
                    census.entry(census.residue_of(p)),
                    Some((x.n_s, x.n_t)),
                    "l={ell} r={r} p={p}"
                );
            }
        }
    }

    proptest::proptest! {
        #[test]
        fn spine_never_exceeds_total(idx in 0usize..800) {
            let pred = Predictor::new(3, 3).unwrap();
            let primes = crate::arith::primes_between(2783, 12_000);
            let x = pred.predict(primes[idx % primes.len()]).unwrap();
            proptest::prop_assert!(x.n_s <= x.n_t);
            proptest::prop_assert_eq!(x.n_s % 2, 0);
            proptest::prop_assert_eq!((x.n_t * 3) % 2, 0);
        }
    }
}
