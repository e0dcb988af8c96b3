//! Independent oracles shared by the integration tests. They recompute
//! payoffs and stability from first principles instead of reusing the
//! library's closed forms.
#![allow(dead_code)]

use netform_core::rational::int;
use netform_core::{CostFunction, GameKind, GameSpec, Graph, Rational};
use num_traits::Zero;

/// Solves `a x = b` by Gauss-Jordan elimination over the rationals.
pub fn solve(mut a: Vec<Vec<Rational>>, mut b: Vec<Rational>) -> Vec<Rational> {
    let n = b.len();
    for col in 0..n {
        let pivot = (col..n).find(|&r| !a[r][col].is_zero()).expect("nonsingular system");
        a.swap(col, pivot);
        b.swap(col, pivot);
        let p = a[col][col].clone();
        for c in 0..n {
            a[col][c] = &a[col][c] / &p;
        }
        b[col] = &b[col] / &p;
        for r in 0..n {
            if r != col && !a[r][col].is_zero() {
                let factor = a[r][col].clone();
                for c in 0..n {
                    let v = &factor * &a[col][c];
                    a[r][c] -= v;
                }
                let v = &factor * &b[col];
                b[r] -= v;
            }
        }
    }
    b
}

/// Cournot equilibrium from the first-order conditions
/// `alpha - Q - q_i - c_i = 0`, i.e. `(I + J) q = alpha - c`.
pub fn cournot_oracle(alpha: &Rational, marginal_costs: &[Rational]) -> (Vec<Rational>, Vec<Rational>) {
    let n = marginal_costs.len();
    let a = (0..n).map(|r| (0..n).map(|c| int(if r == c { 2 } else { 1 })).collect()).collect();
    let b = marginal_costs.iter().map(|c| alpha - c).collect();
    let q = solve(a, b);
    let total: Rational = q.iter().sum();
    let payoffs = q.iter().zip(marginal_costs).map(|(qi, ci)| qi * (alpha - &total - ci)).collect();
    (q, payoffs)
}

pub fn marginal_costs(gamma0: &Rational, costs: &[CostFunction], g: &Graph) -> Vec<Rational> {
    g.degrees().iter().zip(costs).map(|(&d, f)| gamma0 + f.eval(d as i64).unwrap()).collect()
}

/// Payoffs of either game kind, Cournot via the linear-system oracle.
pub fn payoffs_oracle(spec: &GameSpec, g: &Graph) -> Vec<Rational> {
    match spec.kind() {
        GameKind::DegreeTarget { targets, penalty } => g
            .degrees()
            .iter()
            .zip(targets.as_slice())
            .map(|(&d, &k)| -penalty.eval(d as i64 - k as i64).unwrap())
            .collect(),
        GameKind::Cournot { alpha, gamma0, costs } => cournot_oracle(alpha, &marginal_costs(gamma0, costs, g)).1,
    }
}

/// Pairwise stability straight from the definition, editing the graph for
/// every candidate link.
pub fn stable_oracle(spec: &GameSpec, g: &Graph) -> bool {
    let n = g.node_count();
    let y = payoffs_oracle(spec, g);
    for i in 0..n {
        for j in i + 1..n {
            if g.has_edge(i, j).unwrap() {
                let y2 = payoffs_oracle(spec, &g.without_edge(i, j).unwrap());
                if y2[i] > y[i] || y2[j] > y[j] {
                    return false;
                }
            } else {
                let y2 = payoffs_oracle(spec, &g.with_edge(i, j).unwrap());
                if (y2[i] > y[i] && y2[j] >= y[j]) || (y2[j] > y[j] && y2[i] >= y[i]) {
                    return false;
                }
            }
        }
    }
    true
}

/// Codes of all stable graphs on `spec.n()` nodes by the oracle.
pub fn census_oracle(spec: &GameSpec) -> Vec<u64> {
    let n = spec.n();
    let slots = n * (n - 1) / 2;
    (0..1u64 << slots).filter(|&code| stable_oracle(spec, &Graph::from_code_u64(n, code).unwrap())).collect()
}

/// Smallest code over all relabelings: equal exactly for isomorphic graphs.
pub fn canonical_code(g: &Graph) -> u64 {
    let n = g.node_count();
    let edges: Vec<(usize, usize)> = g.edges().collect();
    let mut perm: Vec<usize> = (0..n).collect();
    let mut best = u64::MAX;
    loop {
        let relabeled: Vec<(usize, usize)> =
            edges.iter().map(|&(a, b)| (perm[a].min(perm[b]), perm[a].max(perm[b]))).collect();
        best = best.min(Graph::from_edges(n, &relabeled).unwrap().code_u64().unwrap());
        if !next_permutation(&mut perm) {
            return best;
        }
    }
}

fn next_permutation(p: &mut [usize]) -> bool {
    let Some(i) = (1..p.len()).rev().find(|&i| p[i - 1] < p[i]) else {
        return false;
    };
    let j = (i..p.len()).rev().find(|&j| p[j] > p[i - 1]).unwrap();
    p.swap(i - 1, j);
    p[i..].reverse();
    true
}

/// Degree sequence of a random graph on `n` nodes: graphical by construction.
pub fn random_graphical<R: rand::Rng>(rng: &mut R, n: usize) -> Vec<usize> {
    let density: f64 = rng.gen_range(0.1..0.9);
    let mut d = vec![0; n];
    for i in 0..n {
        for j in i + 1..n {
            if rng.gen_bool(density) {
                d[i] += 1;
                d[j] += 1;
            }
        }
    }
    d
}

/// Every graph on `n` nodes whose degree vector equals `d`.
pub fn realizations(d: &[usize]) -> Vec<Graph> {
    let n = d.len();
    let slots = n * (n - 1) / 2;
    (0..1u64 << slots).map(|code| Graph::from_code_u64(n, code).unwrap()).filter(|g| g.degrees() == d).collect()
}
