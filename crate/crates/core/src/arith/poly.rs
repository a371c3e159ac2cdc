//! Dense univariate polynomials over `F_{p^2}` and root extraction by
//! equal-degree splitting.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{ArithError, FieldElementF2 as F2, PrimeContext};

/// Coefficients in increasing degree; no trailing zeros.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Poly(Vec<F2>);

impl Poly {
    pub fn new(mut coeffs: Vec<F2>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        Poly(coeffs)
    }

    pub fn coeffs(&self) -> &[F2] {
        &self.0
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_empty()
    }

    /// Degree, with the zero polynomial reported as `None`.
    pub fn degree(&self) -> Option<usize> {
        self.0.len().checked_sub(1)
    }

    fn lead(&self) -> F2 {
        *self
            .0
            .last()
            .expect("zero polynomial has no leading coefficient")
    }

    pub fn eval(&self, ctx: &PrimeContext, x: F2) -> F2 {
        self.0
            .iter()
            .rev()
            .fold(F2::ZERO, |acc, &c| ctx.add(ctx.mul(acc, x), c))
    }

    pub fn monic(&self, ctx: &PrimeContext) -> Poly {
        let inv = ctx.inv(self.lead());
        Poly(self.0.iter().map(|&c| ctx.mul(c, inv)).collect())
    }

    pub fn sub(&self, ctx: &PrimeContext, other: &Poly) -> Poly {
        let n = self.0.len().max(other.0.len());
        let coeffs = (0..n)
            .map(|i| {
                let x = self.0.get(i).copied().unwrap_or(F2::ZERO);
                let y = other.0.get(i).copied().unwrap_or(F2::ZERO);
                ctx.sub(x, y)
            })
            .collect();
        Poly::new(coeffs)
    }

    pub fn mul(&self, ctx: &PrimeContext, other: &Poly) -> Poly {
        if self.is_zero() || other.is_zero() {
            return Poly(Vec::new());
        }
        let mut out = vec![F2::ZERO; self.0.len() + other.0.len() - 1];
        for (i, &x) in self.0.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            for (j, &y) in other.0.iter().enumerate() {
                out[i + j] = ctx.add(out[i + j], ctx.mul(x, y));
            }
        }
        Poly::new(out)
    }

    /// Quotient and remainder; panics on a zero divisor.
    pub fn div_rem(&self, ctx: &PrimeContext, divisor: &Poly) -> (Poly, Poly) {
        let dd = divisor.degree().expect("division by the zero polynomial");
        let mut rem = self.0.clone();
        if rem.len() <= dd {
            return (Poly(Vec::new()), Poly::new(rem));
        }
        let inv_lead = ctx.inv(divisor.lead());
        let mut quot = vec![F2::ZERO; rem.len() - dd];
        for k in (0..quot.len()).rev() {
            let c = ctx.mul(rem[k + dd], inv_lead);
            quot[k] = c;
            if c.is_zero() {
                continue;
            }
            for (i, &d) in divisor.0.iter().enumerate() {
                rem[k + i] = ctx.sub(rem[k + i], ctx.mul(c, d));
            }
        }
        rem.truncate(dd);
        (Poly::new(quot), Poly::new(rem))
    }

    pub fn rem(&self, ctx: &PrimeContext, divisor: &Poly) -> Poly {
        self.div_rem(ctx, divisor).1
    }

    /// Monic gcd; gcd(0, 0) is zero.
    pub fn gcd(&self, ctx: &PrimeContext, other: &Poly) -> Poly {
        let mut a = self.clone();
        let mut b = other.clone();
        while !b.is_zero() {
            let r = a.rem(ctx, &b);
            a = b;
            b = r;
        }
        if a.is_zero() {
            a
        } else {
            a.monic(ctx)
        }
    }

    /// `self^e mod modulus` by square-and-multiply.
    pub fn pow_mod(&self, ctx: &PrimeContext, mut e: u128, modulus: &Poly) -> Poly {
        let mut acc = Poly(vec![F2::ONE]).rem(ctx, modulus);
        let mut base = self.rem(ctx, modulus);
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(ctx, &base).rem(ctx, modulus);
            }
            base = base.mul(ctx, &base).rem(ctx, modulus);
            e >>= 1;
        }
        acc
    }

    fn x() -> Poly {
        Poly(vec![F2::ZERO, F2::ONE])
    }

    fn from_linear(root: F2, ctx: &PrimeContext) -> Poly {
        Poly(vec![ctx.neg(root), F2::ONE])
    }
}

/// All roots of `coeffs` (increasing degree) in `F_{p^2}`, with multiplicity,
/// sorted by `(a, b)`.
///
/// The distinct roots come from `gcd(f, Y^{p^2} - Y)` split by
/// `gcd(g, (Y + α)^{(p^2 - 1)/2} - 1)` for seeded random `α`; multiplicities
/// come from exact division of `f`.
pub fn f2_roots(coeffs: &[F2], ctx: &PrimeContext, seed: u64) -> Result<Vec<F2>, ArithError> {
    let f = Poly::new(coeffs.to_vec());
    let Some(deg) = f.degree() else {
        return Err(ArithError::ZeroPolynomial);
    };
    if deg == 0 {
        return Ok(Vec::new());
    }
    let f = f.monic(ctx);
    let q = (ctx.p() as u128) * (ctx.p() as u128);
    let frob = Poly::x().pow_mod(ctx, q, &f);
    let split_part = f.gcd(ctx, &frob.sub(ctx, &Poly::x()));

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut distinct = Vec::new();
    split_linear(&split_part, ctx, &mut rng, &mut distinct);

    let mut rest = f;
    let mut roots = Vec::with_capacity(deg);
    for &r in &distinct {
        let lin = Poly::from_linear(r, ctx);
        loop {
            let (quot, rem) = rest.div_rem(ctx, &lin);
            if !rem.is_zero() {
                break;
            }
            rest = quot;
            roots.push(r);
        }
    }
    let leftover = rest.degree().unwrap_or(0);
    if leftover > 0 {
        return Err(ArithError::NonSplitInput { leftover });
    }
    roots.sort_unstable();
    Ok(roots)
}

/// Split a monic squarefree product of distinct linear factors.
fn split_linear(g: &Poly, ctx: &PrimeContext, rng: &mut ChaCha8Rng, out: &mut Vec<F2>) {
    match g.degree() {
        None | Some(0) => {}
        Some(1) => {
            let g = g.monic(ctx);
            out.push(ctx.neg(g.0[0]));
        }
        Some(d) => {
            let half = ctx.f2_group_order() / 2;
            let p = ctx.p();
            loop {
                let alpha = F2 {
                    a: rng.random_range(0..p),
                    b: rng.random_range(0..p),
                };
                let shifted = Poly(vec![alpha, F2::ONE]);
                let t = shifted.pow_mod(ctx, half, g);
                let h = g.gcd(ctx, &t.sub(ctx, &Poly(vec![F2::ONE])));
                let hd = h.degree().unwrap_or(0);
                if hd > 0 && hd < d {
                    let (other, _) = g.div_rem(ctx, &h);
                    split_linear(&h, ctx, rng, out);
                    split_linear(&other.monic(ctx), ctx, rng, out);
                    return;
                }
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn fp(x: u64) -> F2 {
        F2::from_fp(x)
    }

    fn product_of_roots(ctx: &PrimeContext, roots: &[F2]) -> Vec<F2> {
        roots
            .iter()
            .fold(Poly(vec![F2::ONE]), |acc, &r| {
                acc.mul(ctx, &Poly::from_linear(r, ctx))
            })
            .0
    }

    #[test]
    fn roots_of_y2_minus_one() {
        let ctx = PrimeContext::new(101).unwrap();
        let roots = f2_roots(&[fp(100), fp(0), fp(1)], &ctx, 0).unwrap();
        assert_eq!(roots, vec![fp(1), fp(100)]);
    }

    #[test]
    fn repeated_roots_are_counted() {
        let ctx = PrimeContext::new(4643).unwrap();
        let c = F2 { a: 17, b: 4000 };
        let e = fp(173);
        let coeffs = product_of_roots(&ctx, &[c, c, e]);
        let mut expected = vec![c, c, e];
        expected.sort();
        assert_eq!(f2_roots(&coeffs, &ctx, 0).unwrap(), expected);
        assert_eq!(f2_roots(&coeffs, &ctx, 99).unwrap(), expected);
    }

    #[test]
    fn zero_is_a_root() {
        let ctx = PrimeContext::new(13).unwrap();
        let coeffs = product_of_roots(&ctx, &[F2::ZERO, F2::ZERO, fp(5), F2 { a: 0, b: 1 }]);
        let roots = f2_roots(&coeffs, &ctx, 3).unwrap();
        assert_eq!(roots.len(), 4);
        assert_eq!(&roots[..2], &[F2::ZERO, F2::ZERO]);
    }

    #[test]
    fn non_split_input_detected() {
        // Y^3 - s has no root in F_{p^2} when s is a non-cube there; p = 7,
        // F_49^* has order 48 so cubing is not surjective.
        let ctx = PrimeContext::new(7).unwrap();
        let found = (1..7u64)
            .flat_map(|a| (0..7u64).map(move |b| F2 { a, b }))
            .find_map(|s| {
                let coeffs = [ctx.neg(s), F2::ZERO, F2::ZERO, F2::ONE];
                match f2_roots(&coeffs, &ctx, 0) {
                    Err(ArithError::NonSplitInput { leftover }) => Some(leftover),
                    _ => None,
                }
            });
        assert_eq!(found, Some(3));
    }

    #[test]
    fn zero_polynomial_rejected() {
        let ctx = PrimeContext::new(11).unwrap();
        assert_eq!(f2_roots(&[], &ctx, 0), Err(ArithError::ZeroPolynomial));
        assert_eq!(f2_roots(&[fp(3)], &ctx, 0), Ok(vec![]));
    }

    proptest::proptest! {
        #[test]
        fn roots_reconstruct_polynomial(
            raw in proptest::collection::vec((0u64..1019, 0u64..1019), 1..=8),
            seed in 0u64..1000,
        ) {
            let ctx = PrimeContext::new(1019).unwrap();
            let mut roots: Vec<F2> = raw.into_iter().map(|(a, b)| F2 { a, b }).collect();
            let coeffs = product_of_roots(&ctx, &roots);
            let found = f2_roots(&coeffs, &ctx, seed).unwrap();
            roots.sort();
            proptest::prop_assert_eq!(&found, &roots);
            let f = Poly::new(coeffs);
            for r in found {
                proptest::prop_assert!(f.eval(&ctx, r).is_zero());
            }
        }
    }
}
