//! Supersingular ℓ-isogeny graphs over `F_{p^2}` built from modular polynomials.

pub mod modpoly;

use std::collections::{HashMap, VecDeque};
use std::fmt::Write as _;

use thiserror::Error;

use crate::arith::{f2_roots, is_prime, ArithError, FieldElementF2 as F2, PrimeContext};

pub use modpoly::{ModularPolynomialData, ReducedModularPolynomial};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GraphError {
    #[error(transparent)]
    Arith(#[from] ArithError),
    #[error("no built-in modular polynomial for l = {0}")]
    UnsupportedEll(u64),
    #[error("p = {0} must be a prime greater than 13")]
    InvalidPrime(u64),
    #[error("p must differ from l = {0}")]
    PrimeEqualsEll(u64),
    #[error("modular polynomial is for l = {found}, expected {expected}")]
    EllMismatch { expected: u64, found: u64 },
    #[error("graph closure has {found} vertices, expected {expected}")]
    VertexCountMismatch { expected: usize, found: usize },
    #[error("modular polynomial line {line}: {message}")]
    Parse { line: usize, message: String },
}

/// Number of supersingular j-invariants in characteristic `p`.
pub fn expected_vertex_count(p: u64) -> usize {
    let eps = match p % 12 {
        1 => 0,
        5 | 7 => 1,
        11 => 2,
        _ => 0,
    };
    ((p - 1) / 12 + eps) as usize
}

/// Trace-zero test for a j-invariant in `F_p`, by full character sum.
pub fn is_supersingular(j: u64, ctx: &PrimeContext) -> bool {
    let p = ctx.p();
    let j = j % p;
    let (a, b) = if j == 0 {
        (0, 1)
    } else if j == 1728 % p {
        (1, 0)
    } else {
        let k = ctx.fp_mul(j, ctx.fp_inv(ctx.fp_sub(1728 % p, j)));
        (ctx.fp_mul(3, k), ctx.fp_mul(2, k))
    };
    let mut square = vec![false; p as usize];
    for x in 1..p {
        square[ctx.fp_mul(x, x) as usize] = true;
    }
    let mut trace: i64 = 0;
    for x in 0..p {
        let rhs = ctx.fp_add(
            ctx.fp_mul(ctx.fp_mul(x, x), x),
            ctx.fp_add(ctx.fp_mul(a, x), b),
        );
        if rhs != 0 {
            trace += if square[rhs as usize] { 1 } else { -1 };
        }
    }
    trace == 0
}

pub fn find_supersingular_j(ctx: &PrimeContext) -> u64 {
    let p = ctx.p();
    if p % 4 == 3 {
        1728 % p
    } else if p % 3 == 2 {
        0
    } else {
        (1..p)
            .find(|&j| is_supersingular(j, ctx))
            .expect("every characteristic has a supersingular j in F_p")
    }
}

fn vertex_seed(seed: u64, j: F2) -> u64 {
    let mut z = seed
        ^ j.a.wrapping_mul(0x9E37_79B9_7F4A_7C15)
        ^ j.b.wrapping_mul(0xC2B2_AE3D_27D4_EB4F).rotate_left(31);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IsogenyGraph {
    p: u64,
    ell: u64,
    vertices: Vec<F2>,
    /// Per vertex: `(target, multiplicity)` sorted by target.
    out_edges: Vec<Vec<(usize, u32)>>,
    spine: Vec<bool>,
}

pub fn build_graph(p: u64, ell: u64, seed: u64) -> Result<IsogenyGraph, GraphError> {
    let phi = ModularPolynomialData::builtin(ell)?;
    build_graph_with(p, &phi, seed)
}

pub fn build_graph_with(
    p: u64,
    phi: &ModularPolynomialData,
    seed: u64,
) -> Result<IsogenyGraph, GraphError> {
    let ell = phi.ell();
    if p <= 13 || !is_prime(p) {
        return Err(GraphError::InvalidPrime(p));
    }
    if p == ell {
        return Err(GraphError::PrimeEqualsEll(ell));
    }
    let ctx = PrimeContext::new(p)?;
    let red = phi.reduce(&ctx);
    let start = F2::from_fp(find_supersingular_j(&ctx));

    let mut seen: HashMap<F2, Vec<F2>> = HashMap::new();
    let mut queue = VecDeque::from([start]);
    let mut queued: std::collections::HashSet<F2> = [start].into_iter().collect();
    while let Some(j) = queue.pop_front() {
        let roots = f2_roots(&red.specialize(j), &ctx, vertex_seed(seed, j))?;
        for &r in &roots {
            if queued.insert(r) {
                queue.push_back(r);
            }
        }
        seen.insert(j, roots);
    }

    let expected = expected_vertex_count(p);
    if seen.len() != expected {
        return Err(GraphError::VertexCountMismatch {
            expected,
            found: seen.len(),
        });
    }
    let mut vertices: Vec<F2> = seen.keys().copied().collect();
    vertices.sort_unstable();
    let index: HashMap<F2, usize> = vertices.iter().enumerate().map(|(i, &j)| (j, i)).collect();
    let out_edges = vertices
        .iter()
        .map(|j| {
            let mut targets: Vec<usize> = seen[j].iter().map(|r| index[r]).collect();
            targets.sort_unstable();
            let mut edges: Vec<(usize, u32)> = Vec::new();
            for t in targets {
                match edges.last_mut() {
                    Some((last, m)) if *last == t => *m += 1,
                    _ => edges.push((t, 1)),
                }
            }
            edges
        })
        .collect();
    let spine = vertices.iter().map(|j| j.is_fp()).collect();
    Ok(IsogenyGraph {
        p,
        ell,
        vertices,
        out_edges,
        spine,
    })
}

impl IsogenyGraph {
    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn ell(&self) -> u64 {
        self.ell
    }

    pub fn vertex_count(&self) -> usize {
        self.vertices.len()
    }

    pub fn vertices(&self) -> &[F2] {
        &self.vertices
    }

    pub fn j(&self, v: usize) -> F2 {
        self.vertices[v]
    }

    pub fn index_of(&self, j: F2) -> Option<usize> {
        self.vertices.binary_search(&j).ok()
    }

    pub fn neighbors(&self, v: usize) -> &[(usize, u32)] {
        &self.out_edges[v]
    }

    pub fn multiplicity(&self, u: usize, v: usize) -> u32 {
        let edges = &self.out_edges[u];
        edges
            .binary_search_by_key(&v, |e| e.0)
            .map(|i| edges[i].1)
            .unwrap_or(0)
    }

    pub fn is_spine(&self, v: usize) -> bool {
        self.spine[v]
    }

    pub fn spine_size(&self) -> usize {
        self.spine.iter().filter(|&&s| s).count()
    }

    /// Whether `v` is `j = 0` or `j = 1728`.
    pub fn is_special(&self, v: usize) -> bool {
        let j = self.vertices[v];
        j.b == 0 && (j.a == 0 || j.a == 1728 % self.p)
    }

    /// Graph-description text with spine vertices drawn as double circles.
    pub fn to_dot(&self) -> String {
        let mut out = format!("digraph \"G_{}_{}\" {{\n", self.p, self.ell);
        for (i, j) in self.vertices.iter().enumerate() {
            let shape = if self.spine[i] {
                "doublecircle"
            } else {
                "circle"
            };
            let _ = writeln!(out, "  v{i} [label=\"{j}\", shape={shape}];");
        }
        for (u, edges) in self.out_edges.iter().enumerate() {
            for &(v, m) in edges {
                if m > 1 {
                    let _ = writeln!(out, "  v{u} -> v{v} [label=\"{m}\"];");
                } else {
                    let _ = writeln!(out, "  v{u} -> v{v};");
                }
            }
        }
        out.push_str("}\n");
        out
    }
}
