//! Classical modular polynomials `Φ_ℓ(X, Y)` as integer coefficient tables.
//!
//! Text format: one monomial per line, `i j coefficient` for `X^i Y^j` with
//! `i >= j` (the `X^j Y^i` term is implied by symmetry); `#` starts a comment.

use std::path::Path;

use crate::arith::{FieldElementF2, PrimeContext};

use super::GraphError;

const PHI2: &str = include_str!("../../data/phi2.txt");
const PHI3: &str = include_str!("../../data/phi3.txt");
const PHI5: &str = include_str!("../../data/phi5.txt");
const PHI7: &str = include_str!("../../data/phi7.txt");

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ModularPolynomialData {
    ell: u64,
    /// `(i, j, coefficient)` with `i >= j`, coefficients as decimal strings.
    terms: Vec<(usize, usize, String)>,
}

impl ModularPolynomialData {
    /// Embedded table for `ℓ ∈ {2, 3, 5, 7}`.
    pub fn builtin(ell: u64) -> Result<Self, GraphError> {
        let text = match ell {
            2 => PHI2,
            3 => PHI3,
            5 => PHI5,
            7 => PHI7,
            _ => return Err(GraphError::UnsupportedEll(ell)),
        };
        Self::parse(text)
    }

    pub fn from_file(path: &Path) -> Result<Self, GraphError> {
        let text = std::fs::read_to_string(path).map_err(|e| GraphError::Parse {
            line: 0,
            message: format!("{}: {e}", path.display()),
        })?;
        Self::parse(&text)
    }

    /// Parse the text format; `ℓ` is read off as the top degree minus one.
    pub fn parse(text: &str) -> Result<Self, GraphError> {
        let mut terms: Vec<(usize, usize, String)> = Vec::new();
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let err = |message: String| GraphError::Parse {
                line: lineno + 1,
                message,
            };
            let fields: Vec<&str> = line.split_whitespace().collect();
            let [i, j, c] = fields[..] else {
                return Err(err(format!("expected `i j coefficient`, got {line:?}")));
            };
            let i: usize = i.parse().map_err(|_| err(format!("bad exponent {i:?}")))?;
            let j: usize = j.parse().map_err(|_| err(format!("bad exponent {j:?}")))?;
            let digits = c.strip_prefix('-').unwrap_or(c);
            if digits.is_empty() || !digits.bytes().all(|b| b.is_ascii_digit()) {
                return Err(err(format!("bad coefficient {c:?}")));
            }
            if i < j {
                return Err(err(format!(
                    "monomial X^{i} Y^{j} must be listed with i >= j"
                )));
            }
            if terms.iter().any(|t| t.0 == i && t.1 == j) {
                return Err(err(format!("duplicate monomial X^{i} Y^{j}")));
            }
            terms.push((i, j, c.to_string()));
        }
        let top = terms.iter().map(|t| t.0).max().ok_or(GraphError::Parse {
            line: 0,
            message: "no monomials".into(),
        })?;
        if top < 2 {
            return Err(GraphError::Parse {
                line: 0,
                message: format!("degree {top} too small for a modular polynomial"),
            });
        }
        let data = Self {
            ell: top as u64 - 1,
            terms,
        };
        data.check_shape()?;
        Ok(data)
    }

    fn check_shape(&self) -> Result<(), GraphError> {
        let top = self.ell as usize + 1;
        let bad = |message: String| GraphError::Parse { line: 0, message };
        match self.coefficient(top, 0) {
            Some("1") => {}
            other => return Err(bad(format!("X^{top} coefficient must be 1, got {other:?}"))),
        }
        if self.terms.iter().any(|t| t.0 == top && t.1 > 0) {
            return Err(bad(format!("X^{top} may only appear alone")));
        }
        match self.coefficient(top - 1, top - 1) {
            Some("-1") => Ok(()),
            other => Err(bad(format!(
                "X^{0} Y^{0} coefficient must be -1, got {other:?}",
                top - 1
            ))),
        }
    }

    pub fn ell(&self) -> u64 {
        self.ell
    }

    /// Coefficient of `X^i Y^j` as written, using symmetry.
    pub fn coefficient(&self, i: usize, j: usize) -> Option<&str> {
        let (i, j) = if i >= j { (i, j) } else { (j, i) };
        self.terms
            .iter()
            .find(|t| t.0 == i && t.1 == j)
            .map(|t| t.2.as_str())
    }

    pub fn terms(&self) -> &[(usize, usize, String)] {
        &self.terms
    }

    /// Dense table of coefficients reduced into `F_p`.
    pub fn reduce(&self, ctx: &PrimeContext) -> ReducedModularPolynomial {
        let n = self.ell as usize + 2;
        let mut table = vec![vec![0u64; n]; n];
        for (i, j, c) in &self.terms {
            let v = decimal_mod(c, ctx.p());
            table[*i][*j] = v;
            table[*j][*i] = v;
        }
        ReducedModularPolynomial { ctx: *ctx, table }
    }
}

/// Reduce a signed decimal string modulo `p`.
fn decimal_mod(s: &str, p: u64) -> u64 {
    let (neg, digits) = match s.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, s),
    };
    let v = digits
        .bytes()
        .fold(0u128, |acc, b| (acc * 10 + (b - b'0') as u128) % p as u128) as u64;
    if neg && v != 0 {
        p - v
    } else {
        v
    }
}

/// `Φ_ℓ` over `F_p`, as `table[i][j]` for `X^i Y^j`.
#[derive(Debug, Clone)]
pub struct ReducedModularPolynomial {
    ctx: PrimeContext,
    table: Vec<Vec<u64>>,
}

impl ReducedModularPolynomial {
    pub fn coefficient(&self, i: usize, j: usize) -> u64 {
        self.table[i][j]
    }

    /// Coefficients of `Φ_ℓ(x, Y)` in increasing powers of `Y`.
    pub fn specialize(&self, x: FieldElementF2) -> Vec<FieldElementF2> {
        let ctx = &self.ctx;
        let n = self.table.len();
        let mut powers = Vec::with_capacity(n);
        let mut acc = FieldElementF2::ONE;
        for _ in 0..n {
            powers.push(acc);
            acc = ctx.mul(acc, x);
        }
        (0..n)
            .map(|k| {
                (0..n).fold(FieldElementF2::ZERO, |sum, i| {
                    let c = self.table[i][k];
                    if c == 0 {
                        sum
                    } else {
                        ctx.add(sum, ctx.scale(powers[i], c))
                    }
                })
            })
            .collect()
    }

    pub fn eval(&self, x: FieldElementF2, y: FieldElementF2) -> FieldElementF2 {
        let ctx = &self.ctx;
        self.specialize(x)
            .iter()
            .rev()
            .fold(FieldElementF2::ZERO, |acc, &c| ctx.add(ctx.mul(acc, y), c))
    }
}
