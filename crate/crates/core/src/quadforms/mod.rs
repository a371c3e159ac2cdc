//! Imaginary quadratic discriminants and their form class groups.
//!
//! Classes are represented by reduced primitive positive-definite forms; the
//! group law is Dirichlet composition followed by Gauss reduction.

mod group;

pub use group::ClassGroup;

use std::fmt;

use thiserror::Error;

use crate::arith::{factorize, kronecker};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum QuadError {
    #[error("{0} is not a negative discriminant (need D < 0, D = 0 or 1 mod 4)")]
    InvalidDiscriminant(i64),
    #[error("{ell} does not split in the order of discriminant {d}")]
    NotSplit { d: i64, ell: u64 },
    #[error("{ell} divides the conductor of discriminant {d}")]
    NotEllFundamental { d: i64, ell: u64 },
}

/// A negative discriminant `D = f^2 · d_K`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Discriminant {
    value: i64,
    fundamental: i64,
    conductor: u64,
}

impl Discriminant {
    pub fn new(value: i64) -> Result<Self, QuadError> {
        if value >= 0 || !matches!(value.rem_euclid(4), 0 | 1) {
            return Err(QuadError::InvalidDiscriminant(value));
        }
        let mut square_root = 1u64;
        let mut core = 1u64;
        for (q, e) in factorize(value.unsigned_abs()).0 {
            square_root *= q.pow(e / 2);
            if e % 2 == 1 {
                core *= q;
            }
        }
        let core = -(core as i64);
        let (fundamental, conductor) = if core.rem_euclid(4) == 1 {
            (core, square_root)
        } else {
            // D ≡ 0 mod 4 with squarefree part ≡ 2, 3 mod 4 forces 2 | square_root
            (4 * core, square_root / 2)
        };
        Ok(Self {
            value,
            fundamental,
            conductor,
        })
    }

    pub fn value(&self) -> i64 {
        self.value
    }

    pub fn fundamental(&self) -> i64 {
        self.fundamental
    }

    pub fn conductor(&self) -> u64 {
        self.conductor
    }

    pub fn abs(&self) -> u64 {
        self.value.unsigned_abs()
    }

    pub fn is_fundamental(&self) -> bool {
        self.conductor == 1
    }
}

impl fmt::Display for Discriminant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.value)
    }
}

/// `a x^2 + b xy + c y^2`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct BinaryQuadraticForm {
    pub a: i64,
    pub b: i64,
    pub c: i64,
}

impl fmt::Display for BinaryQuadraticForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {}, {})", self.a, self.b, self.c)
    }
}

impl BinaryQuadraticForm {
    pub fn new(a: i64, b: i64, c: i64) -> Self {
        Self { a, b, c }
    }

    pub fn discriminant(&self) -> i64 {
        self.b * self.b - 4 * self.a * self.c
    }

    /// The form `(1, b, c)` with `b ∈ {0, 1}`.
    pub fn principal(d: Discriminant) -> Self {
        let b = d.value().rem_euclid(2);
        Self {
            a: 1,
            b,
            c: (b * b - d.value()) / 4,
        }
    }

    pub fn is_primitive(&self) -> bool {
        crate::arith::gcd(
            crate::arith::gcd(self.a.unsigned_abs(), self.b.unsigned_abs()),
            self.c.unsigned_abs(),
        ) == 1
    }

    pub fn is_reduced(&self) -> bool {
        let (a, b, c) = (self.a, self.b, self.c);
        b.abs() <= a && a <= c && !((b.abs() == a || a == c) && b < 0)
    }

    /// Inverse class `(a, -b, c)`, reduced.
    pub fn inverse(&self) -> Self {
        Self::new(self.a, -self.b, self.c).reduce()
    }

    /// Gauss reduction of a positive-definite form.
    pub fn reduce(&self) -> Self {
        let d = self.discriminant() as i128;
        let (mut a, mut b, mut c) = (self.a as i128, self.b as i128, self.c as i128);
        debug_assert!(a > 0 && d < 0);
        loop {
            if !(-a < b && b <= a) {
                let two_a = 2 * a;
                let mut r = b.rem_euclid(two_a);
                if r > a {
                    r -= two_a;
                }
                b = r;
                c = (b * b - d) / (4 * a);
            }
            if a > c {
                (a, b, c) = (c, -b, a);
                continue;
            }
            if a == c && b < 0 {
                b = -b;
            }
            break;
        }
        Self::new(a as i64, b as i64, c as i64)
    }

    pub fn is_principal(&self) -> bool {
        let r = self.reduce();
        r.a == 1
    }

    /// Value of the form at `(x, y)`.
    pub fn eval(&self, x: i64, y: i64) -> i64 {
        self.a * x * x + self.b * x * y + self.c * y * y
    }
}

/// Extended gcd on signed integers: `(g, u, v)` with `u·a + v·b = g >= 0`.
fn xgcd(a: i64, b: i64) -> (i64, i64, i64) {
    let (mut old_r, mut r) = (a, b);
    let (mut old_s, mut s) = (1i64, 0i64);
    let (mut old_t, mut t) = (0i64, 1i64);
    while r != 0 {
        let q = old_r / r;
        (old_r, r) = (r, old_r - q * r);
        (old_s, s) = (s, old_s - q * s);
        (old_t, t) = (t, old_t - q * t);
    }
    if old_r < 0 {
        (-old_r, -old_s, -old_t)
    } else {
        (old_r, old_s, old_t)
    }
}

/// All reduced primitive forms of discriminant `D`, sorted by `(a, b)`.
pub fn reduced_forms(d: Discriminant) -> Vec<BinaryQuadraticForm> {
    let dv = d.value();
    let parity = dv.rem_euclid(2);
    let mut out = Vec::new();
    let mut a = 1i64;
    while 3 * a * a <= -dv {
        let mut b = -a + 1;
        if (b - parity).rem_euclid(2) != 0 {
            b += 1;
        }
        while b <= a {
            let num = b * b - dv;
            if num % (4 * a) == 0 {
                let f = BinaryQuadraticForm::new(a, b, num / (4 * a));
                if f.is_reduced() && f.is_primitive() {
                    out.push(f);
                }
            }
            b += 2;
        }
        a += 1;
    }
    out
}

pub fn class_number(d: Discriminant) -> u64 {
    reduced_forms(d).len() as u64
}

/// Dirichlet composition of two primitive forms of discriminant `D`,
/// returned reduced.
pub fn compose(
    f: &BinaryQuadraticForm,
    g: &BinaryQuadraticForm,
    d: Discriminant,
) -> BinaryQuadraticForm {
    let (f1, f2) = if f.a > g.a { (g, f) } else { (f, g) };
    let (a1, b1) = (f1.a, f1.b);
    let (a2, b2, c2) = (f2.a, f2.b, f2.c);
    let s = (b1 + b2) / 2;
    let n = b2 - s;
    let (d0, y1) = if a2 % a1 == 0 {
        (a1, 0)
    } else {
        let (g0, u, _) = xgcd(a2, a1);
        (g0, u)
    };
    let (d1, x2, y2) = if s % d0 == 0 {
        (d0, 0, -1)
    } else {
        let (g1, u, v) = xgcd(s, d0);
        (g1, u, -v)
    };
    let v1 = a1 / d1;
    let v2 = a2 / d1;
    let r = ((y1 as i128 * y2 as i128 * n as i128 - x2 as i128 * c2 as i128).rem_euclid(v1 as i128))
        as i64;
    let b3 = b2 + 2 * v2 * r;
    let a3 = v1 * v2;
    let c3 = ((b3 as i128 * b3 as i128 - d.value() as i128) / (4 * a3 as i128)) as i64;
    let out = BinaryQuadraticForm::new(a3, b3, c3);
    debug_assert_eq!(out.discriminant(), d.value());
    out.reduce()
}

/// Least `k >= 1` with `f^k` principal.
pub fn form_order(f: &BinaryQuadraticForm, d: Discriminant) -> u64 {
    let base = f.reduce();
    let mut acc = base;
    let mut k = 1;
    while !acc.is_principal() {
        acc = compose(&acc, &base, d);
        k += 1;
    }
    k
}

/// Genus invariant `μ`, with `|cl(D)[2]| = 2^(μ-1)`.
pub fn genus_mu(d: Discriminant) -> u32 {
    let dv = d.value();
    let factors = factorize(d.abs());
    let odd = factors.primes().filter(|&q| q != 2).count() as u32;
    if dv.rem_euclid(4) == 1 {
        return odd;
    }
    let n = -dv / 4;
    match n.rem_euclid(8) {
        3 | 7 => odd,
        1 | 2 | 5 | 6 => odd + 1,
        4 => odd + 1,
        0 => odd + 2,
        _ => unreachable!(),
    }
}

/// `|cl(O_D)[2]|` from genus theory.
pub fn h2(d: Discriminant) -> u64 {
    1u64 << (genus_mu(d) - 1)
}

/// Number of classes `x` with `x·x` principal, read off the full
/// composition table.
pub fn two_torsion_bruteforce(d: Discriminant) -> u64 {
    ClassGroup::new(d).two_torsion_count() as u64
}

/// Reduced representative of the class of `(ℓ, b, (b^2 - D)/(4ℓ))` with
/// least nonnegative `b`, representing a prime of norm `ℓ`.
pub fn prime_form(d: Discriminant, ell: u64) -> Result<BinaryQuadraticForm, QuadError> {
    if d.conductor() % ell == 0 {
        return Err(QuadError::NotEllFundamental { d: d.value(), ell });
    }
    if kronecker(d.value(), ell) != 1 {
        return Err(QuadError::NotSplit { d: d.value(), ell });
    }
    let l = ell as i64;
    let modulus = 4 * l;
    let b = (0..2 * l)
        .find(|&b| (b * b - d.value()).rem_euclid(modulus) == 0)
        .expect("split prime has a square root of D mod 4l");
    Ok(BinaryQuadraticForm::new(l, b, (b * b - d.value()) / modulus).reduce())
}

/// Class-group data of a discriminant relative to a prime `ℓ`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DiscriminantProfile {
    pub discriminant: Discriminant,
    pub h: u64,
    pub mu: u32,
    pub h2: u64,
    pub ell_order: Option<u64>,
}

impl DiscriminantProfile {
    pub fn new(d: Discriminant, ell: u64) -> Self {
        let mu = genus_mu(d);
        Self {
            discriminant: d,
            h: class_number(d),
            mu,
            h2: 1 << (mu - 1),
            ell_order: prime_form(d, ell).ok().map(|f| form_order(&f, d)),
        }
    }
}
