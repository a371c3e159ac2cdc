use std::collections::HashMap;

use super::{compose, reduced_forms, BinaryQuadraticForm, Discriminant};

/// The form class group of a discriminant with its full multiplication table.
#[derive(Debug, Clone)]
pub struct ClassGroup {
    discriminant: Discriminant,
    elements: Vec<BinaryQuadraticForm>,
    table: Vec<Vec<usize>>,
}

impl ClassGroup {
    pub fn new(d: Discriminant) -> Self {
        let elements = reduced_forms(d);
        let index: HashMap<BinaryQuadraticForm, usize> =
            elements.iter().enumerate().map(|(i, &f)| (f, i)).collect();
        let table = elements
            .iter()
            .map(|f| elements.iter().map(|g| index[&compose(f, g, d)]).collect())
            .collect();
        Self {
            discriminant: d,
            elements,
            table,
        }
    }

    pub fn discriminant(&self) -> Discriminant {
        self.discriminant
    }

    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn elements(&self) -> &[BinaryQuadraticForm] {
        &self.elements
    }

    /// Index of the principal class; reduced forms sort it first.
    pub fn identity(&self) -> usize {
        0
    }

    pub fn mul(&self, i: usize, j: usize) -> usize {
        self.table[i][j]
    }

    pub fn two_torsion_count(&self) -> usize {
        (0..self.order())
            .filter(|&i| self.mul(i, i) == self.identity())
            .count()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::gcd;

    /// Dirichlet composition by exhaustive search: move `g` to an equivalent
    /// form whose leading coefficient is coprime to `f`'s data, then find the
    /// common middle coefficient `B` directly.
    fn dirichlet_oracle(
        f: &BinaryQuadraticForm,
        g: &BinaryQuadraticForm,
        d: i64,
    ) -> BinaryQuadraticForm {
        for x in -6i64..=6 {
            for y in -6i64..=6 {
                if gcd(x.unsigned_abs(), y.unsigned_abs()) != 1 {
                    continue;
                }
                // complete (x, y) to a unimodular matrix [[x, z], [y, w]]
                let Some((z, w)) = (-12i64..=12)
                    .flat_map(|z| (-12i64..=12).map(move |w| (z, w)))
                    .find(|&(z, w)| x * w - y * z == 1)
                else {
                    continue;
                };
                let a2 = g.eval(x, y);
                let b2 = 2 * g.a * x * z + g.b * (x * w + y * z) + 2 * g.c * y * w;
                let e = gcd(gcd(f.a as u64, a2 as u64), ((f.b + b2) / 2).unsigned_abs());
                if e != 1 {
                    continue;
                }
                let m = f.a * a2;
                let found = (0..2 * m).find(|&bb| {
                    (bb - f.b).rem_euclid(2 * f.a) == 0
                        && (bb - b2).rem_euclid(2 * a2) == 0
                        && (bb * bb - d).rem_euclid(4 * m) == 0
                });
                if let Some(bb) = found {
                    return BinaryQuadraticForm::new(m, bb, (bb * bb - d) / (4 * m)).reduce();
                }
            }
        }
        panic!("oracle search window too small for {f} * {g}");
    }

    #[test]
    fn composition_matches_dirichlet_oracle() {
        for n in 3..=400i64 {
            let Ok(d) = Discriminant::new(-n) else {
                continue;
            };
            let forms = reduced_forms(d);
            for f in &forms {
                for g in &forms {
                    assert_eq!(
                        compose(f, g, d),
                        dirichlet_oracle(f, g, -n),
                        "D=-{n} {f} {g}"
                    );
                }
            }
        }
    }

    #[test]
    fn group_axioms_exhaustive() {
        for n in 3..=500i64 {
            let Ok(d) = Discriminant::new(-n) else {
                continue;
            };
            let g = ClassGroup::new(d);
            let h = g.order();
            assert_eq!(
                g.elements()[g.identity()],
                BinaryQuadraticForm::principal(d)
            );
            for i in 0..h {
                assert_eq!(g.mul(g.identity(), i), i);
                assert!((0..h).any(|j| g.mul(i, j) == g.identity()));
                for j in 0..h {
                    assert_eq!(g.mul(i, j), g.mul(j, i));
                    for k in 0..h {
                        assert_eq!(g.mul(g.mul(i, j), k), g.mul(i, g.mul(j, k)));
                    }
                }
            }
        }
    }

    #[test]
    fn table_two_torsion_matches_direct_count() {
        for n in [23i64, 104, 420, 4, 3, 84, 5000] {
            if let Ok(d) = Discriminant::new(-n) {
                let direct = reduced_forms(d)
                    .iter()
                    .filter(|f| compose(f, f, d).is_principal())
                    .count();
                assert_eq!(ClassGroup::new(d).two_torsion_count(), direct);
            }
        }
    }
}
