use std::fmt;

use super::{is_prime, kronecker, mul_mod, pow_mod, ArithError};

/// Arithmetic context for `F_p` and `F_{p^2} = F_p[√s]`, where `s` is the
/// least positive quadratic nonresidue mod `p`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PrimeContext {
    p: u64,
    nonresidue: u64,
}

/// `a + b·√s` with `0 <= a, b < p`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct FieldElementF2 {
    pub a: u64,
    pub b: u64,
}

impl FieldElementF2 {
    pub const ZERO: Self = Self { a: 0, b: 0 };
    pub const ONE: Self = Self { a: 1, b: 0 };

    pub fn from_fp(a: u64) -> Self {
        Self { a, b: 0 }
    }

    /// True iff the element lies in the prime field.
    pub fn is_fp(&self) -> bool {
        self.b == 0
    }

    pub fn is_zero(&self) -> bool {
        self.a == 0 && self.b == 0
    }
}

impl fmt::Display for FieldElementF2 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.b == 0 {
            write!(f, "{}", self.a)
        } else {
            write!(f, "{}+{}*t", self.a, self.b)
        }
    }
}

impl PrimeContext {
    /// Upper bound on the modulus so that every `F_p` product fits in `u128`
    /// and `p^2` fits the exponent type used for `F_{p^2}` powers.
    pub const MAX_MODULUS: u64 = 1 << 63;

    pub fn new(p: u64) -> Result<Self, ArithError> {
        if p <= 3 || p >= Self::MAX_MODULUS || !is_prime(p) {
            return Err(ArithError::BadModulus(p));
        }
        let nonresidue = (2..p)
            .find(|&s| kronecker(s as i64, p) == -1)
            .expect("every odd prime has a nonresidue");
        Ok(Self { p, nonresidue })
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn nonresidue(&self) -> u64 {
        self.nonresidue
    }

    /// Reduce a signed integer into `[0, p)`.
    pub fn reduce(&self, x: i64) -> u64 {
        x.rem_euclid(self.p as i64) as u64
    }

    pub fn fp_add(&self, x: u64, y: u64) -> u64 {
        let s = x + y;
        if s >= self.p {
            s - self.p
        } else {
            s
        }
    }

    pub fn fp_sub(&self, x: u64, y: u64) -> u64 {
        if x >= y {
            x - y
        } else {
            x + self.p - y
        }
    }

    pub fn fp_neg(&self, x: u64) -> u64 {
        if x == 0 {
            0
        } else {
            self.p - x
        }
    }

    pub fn fp_mul(&self, x: u64, y: u64) -> u64 {
        mul_mod(x, y, self.p)
    }

    pub fn fp_pow(&self, x: u64, e: u64) -> u64 {
        pow_mod(x, e, self.p)
    }

    /// Inverse by Fermat; panics on zero.
    pub fn fp_inv(&self, x: u64) -> u64 {
        assert!(x % self.p != 0, "inverse of zero in F_p");
        pow_mod(x, self.p - 2, self.p)
    }

    pub fn fp_legendre(&self, x: u64) -> i8 {
        kronecker((x % self.p) as i64, self.p)
    }

    pub fn add(&self, x: FieldElementF2, y: FieldElementF2) -> FieldElementF2 {
        FieldElementF2 {
            a: self.fp_add(x.a, y.a),
            b: self.fp_add(x.b, y.b),
        }
    }

    pub fn sub(&self, x: FieldElementF2, y: FieldElementF2) -> FieldElementF2 {
        FieldElementF2 {
            a: self.fp_sub(x.a, y.a),
            b: self.fp_sub(x.b, y.b),
        }
    }

    pub fn neg(&self, x: FieldElementF2) -> FieldElementF2 {
        FieldElementF2 {
            a: self.fp_neg(x.a),
            b: self.fp_neg(x.b),
        }
    }

    pub fn mul(&self, x: FieldElementF2, y: FieldElementF2) -> FieldElementF2 {
        let p = self.p as u128;
        let (xa, xb, ya, yb) = (x.a as u128, x.b as u128, y.a as u128, y.b as u128);
        let bd = xb * yb % p;
        let a = (xa * ya + bd * self.nonresidue as u128) % p;
        let b = (xa * yb + xb * ya) % p;
        FieldElementF2 {
            a: a as u64,
            b: b as u64,
        }
    }

    pub fn scale(&self, x: FieldElementF2, k: u64) -> FieldElementF2 {
        FieldElementF2 {
            a: self.fp_mul(x.a, k),
            b: self.fp_mul(x.b, k),
        }
    }

    pub fn pow(&self, x: FieldElementF2, mut e: u128) -> FieldElementF2 {
        let mut acc = FieldElementF2::ONE;
        let mut base = x;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            e >>= 1;
        }
        acc
    }

    /// The p-power Frobenius, which on `F_p[√s]` is conjugation `√s ↦ -√s`.
    pub fn frobenius(&self, x: FieldElementF2) -> FieldElementF2 {
        FieldElementF2 {
            a: x.a,
            b: self.fp_neg(x.b),
        }
    }

    pub fn norm(&self, x: FieldElementF2) -> u64 {
        let bb = self.fp_mul(self.fp_mul(x.b, x.b), self.nonresidue);
        self.fp_sub(self.fp_mul(x.a, x.a), bb)
    }

    /// Inverse via the norm; panics on zero.
    pub fn inv(&self, x: FieldElementF2) -> FieldElementF2 {
        let n = self.norm(x);
        let ninv = self.fp_inv(n);
        self.scale(self.frobenius(x), ninv)
    }

    /// Order of the multiplicative group of `F_{p^2}`.
    pub fn f2_group_order(&self) -> u128 {
        (self.p as u128) * (self.p as u128) - 1
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn context_rejects_small_and_composite() {
        assert!(PrimeContext::new(3).is_err());
        assert!(PrimeContext::new(2).is_err());
        assert!(PrimeContext::new(91).is_err());
        let ctx = PrimeContext::new(4643).unwrap();
        assert_eq!(ctx.nonresidue(), 2);
        assert_eq!(PrimeContext::new(17).unwrap().nonresidue(), 3);
    }

    #[test]
    fn nonresidue_is_minimal() {
        for p in super::super::primes_between(5, 3000) {
            let ctx = PrimeContext::new(p).unwrap();
            let s = ctx.nonresidue();
            assert_eq!(kronecker(s as i64, p), -1);
            assert!((1..s).all(|t| kronecker(t as i64, p) == 1));
        }
    }

    #[test]
    fn frobenius_is_p_power() {
        let ctx = PrimeContext::new(1019).unwrap();
        for a in (0..1019).step_by(37) {
            for b in (0..1019).step_by(53) {
                let x = FieldElementF2 { a, b };
                let xp = ctx.pow(x, 1019);
                assert_eq!(xp, ctx.frobenius(x));
                assert_eq!(ctx.frobenius(ctx.frobenius(x)), x);
                assert_eq!(xp == x, b == 0);
            }
        }
    }

    #[test]
    fn inverse_round_trip() {
        let ctx = PrimeContext::new(101).unwrap();
        for a in 0..101 {
            for b in [0, 1, 7, 100] {
                let x = FieldElementF2 { a, b };
                if x.is_zero() {
                    continue;
                }
                assert_eq!(ctx.mul(x, ctx.inv(x)), FieldElementF2::ONE);
            }
        }
    }

    #[test]
    fn group_order_kills_everything() {
        let ctx = PrimeContext::new(4643).unwrap();
        let x = FieldElementF2 { a: 1283, b: 3319 };
        assert_eq!(ctx.pow(x, ctx.f2_group_order()), FieldElementF2::ONE);
    }
}
