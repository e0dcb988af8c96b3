//! Labeled simple graphs, degree sequences, graphicality and exhaustive enumeration.
//!
//! A [`Graph`] stores one `u128` neighbour mask per node. Edge slots are
//! ranked lexicographically over pairs `(i, j)` with `i < j`, so on five
//! nodes `(0,1)` is slot 0, `(0,2)` slot 1, ... and `(3,4)` slot 9. Bit `r`
//! of a graph's code is set iff the pair of rank `r` is an edge; the code is
//! therefore a bijection onto `0..2^(n(n-1)/2)`.

use std::fmt;
use std::ops::Range;
use std::str::FromStr;

use num_bigint::BigUint;
use num_traits::{ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Largest node count a [`Graph`] can hold.
pub const MAX_NODES: usize = 128;

/// Default upper bound on edge slots for exhaustive enumeration (n <= 8).
pub const ENUMERATION_CAP: usize = 28;

pub type Edge = (usize, usize);

pub const fn pair_count(n: usize) -> usize {
    n * n.saturating_sub(1) / 2
}

/// Rank of pair `(i, j)`, `i < j < n`, in lexicographic pair order.
pub const fn pair_rank(n: usize, i: usize, j: usize) -> usize {
    i * n - i * (i + 1) / 2 + (j - i - 1)
}

fn check_n(n: usize) -> Result<()> {
    if (2..=MAX_NODES).contains(&n) {
        Ok(())
    } else {
        Err(Error::InvalidNodeCount(n))
    }
}

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Graph {
    n: usize,
    rows: Vec<u128>,
}

impl Graph {
    pub fn empty(n: usize) -> Result<Self> {
        check_n(n)?;
        Ok(Graph { n, rows: vec![0; n] })
    }

    pub fn complete(n: usize) -> Result<Self> {
        check_n(n)?;
        let all = if n == 128 { u128::MAX } else { (1u128 << n) - 1 };
        let rows = (0..n).map(|i| all & !(1u128 << i)).collect();
        Ok(Graph { n, rows })
    }

    /// Builds a graph from an edge list; duplicate edges are rejected.
    pub fn from_edges(n: usize, edges: &[Edge]) -> Result<Self> {
        let mut g = Graph::empty(n)?;
        for &(i, j) in edges {
            g.insert(i, j)?;
        }
        Ok(g)
    }

    pub fn from_code(n: usize, code: &BigUint) -> Result<Self> {
        check_n(n)?;
        let slots = pair_count(n);
        if code.bits() as usize > slots {
            return Err(Error::CodeOutOfRange { slots });
        }
        let mut g = Graph::empty(n)?;
        let mut rank = 0;
        for i in 0..n {
            for j in i + 1..n {
                if code.bit(rank as u64) {
                    g.set(i, j);
                }
                rank += 1;
            }
        }
        Ok(g)
    }

    /// Fast path of [`Graph::from_code`] for graphs with at most 64 edge slots.
    pub fn from_code_u64(n: usize, code: u64) -> Result<Self> {
        check_n(n)?;
        let slots = pair_count(n);
        if slots < 64 && code >> slots != 0 {
            return Err(Error::CodeOutOfRange { slots });
        }
        let mut g = Graph { n, rows: vec![0; n] };
        let mut rest = code;
        while rest != 0 {
            let rank = rest.trailing_zeros() as usize;
            rest &= rest - 1;
            let (i, j) = pair_from_rank(n, rank).ok_or(Error::CodeOutOfRange { slots })?;
            g.set(i, j);
        }
        Ok(g)
    }

    pub fn node_count(&self) -> usize {
        self.n
    }

    pub fn edge_count(&self) -> usize {
        self.rows.iter().map(|r| r.count_ones() as usize).sum::<usize>() / 2
    }

    pub fn has_edge(&self, i: usize, j: usize) -> Result<bool> {
        self.check_pair(i, j)?;
        Ok(self.contains(i, j))
    }

    /// Returns `g + ij`. Fails if the edge is already present.
    pub fn with_edge(&self, i: usize, j: usize) -> Result<Graph> {
        let mut g = self.clone();
        g.insert(i, j)?;
        Ok(g)
    }

    /// Returns `g - ij`. Fails if the edge is absent.
    pub fn without_edge(&self, i: usize, j: usize) -> Result<Graph> {
        let mut g = self.clone();
        g.remove(i, j)?;
        Ok(g)
    }

    /// In-place `g + ij`.
    pub fn insert(&mut self, i: usize, j: usize) -> Result<()> {
        self.check_pair(i, j)?;
        if self.contains(i, j) {
            return Err(Error::EdgePresent(i.min(j), i.max(j)));
        }
        self.set(i, j);
        Ok(())
    }

    /// In-place `g - ij`.
    pub fn remove(&mut self, i: usize, j: usize) -> Result<()> {
        self.check_pair(i, j)?;
        if !self.contains(i, j) {
            return Err(Error::EdgeAbsent(i.min(j), i.max(j)));
        }
        self.rows[i] &= !(1u128 << j);
        self.rows[j] &= !(1u128 << i);
        Ok(())
    }

    pub fn degree(&self, i: usize) -> Result<usize> {
        if i >= self.n {
            return Err(Error::NodeOutOfRange { node: i, n: self.n });
        }
        Ok(self.rows[i].count_ones() as usize)
    }

    /// Degrees in node order (not sorted).
    pub fn degrees(&self) -> Vec<usize> {
        self.rows.iter().map(|r| r.count_ones() as usize).collect()
    }

    pub fn degree_sequence(&self) -> DegreeSequence {
        DegreeSequence(self.degrees())
    }

    pub fn neighbors(&self, i: usize) -> impl Iterator<Item = usize> + '_ {
        let mut rest = self.rows[i];
        std::iter::from_fn(move || {
            if rest == 0 {
                return None;
            }
            let j = rest.trailing_zeros() as usize;
            rest &= rest - 1;
            Some(j)
        })
    }

    /// Edges `(i, j)`, `i < j`, in canonical pair order.
    pub fn edges(&self) -> impl Iterator<Item = Edge> + '_ {
        (0..self.n).flat_map(move |i| self.neighbors(i).filter(move |&j| j > i).map(move |j| (i, j)))
    }

    /// Absent pairs `(i, j)`, `i < j`, in canonical pair order.
    pub fn non_edges(&self) -> impl Iterator<Item = Edge> + '_ {
        (0..self.n).flat_map(move |i| (i + 1..self.n).filter(move |&j| !self.contains(i, j)).map(move |j| (i, j)))
    }

    pub fn code(&self) -> BigUint {
        let mut code = BigUint::zero();
        for (i, j) in self.edges() {
            code.set_bit(pair_rank(self.n, i, j) as u64, true);
        }
        code
    }

    /// The code as `u64`, when the graph has at most 64 edge slots.
    pub fn code_u64(&self) -> Option<u64> {
        if pair_count(self.n) > 64 {
            return None;
        }
        self.code().to_u64()
    }

    pub fn to_dot(&self) -> String {
        let mut out = String::from("graph G {\n");
        for i in 0..self.n {
            out.push_str(&format!("  {i};\n"));
        }
        for (i, j) in self.edges() {
            out.push_str(&format!("  {i} -- {j};\n"));
        }
        out.push_str("}\n");
        out
    }

    pub(crate) fn contains(&self, i: usize, j: usize) -> bool {
        self.rows[i] >> j & 1 == 1
    }

    fn set(&mut self, i: usize, j: usize) {
        self.rows[i] |= 1u128 << j;
        self.rows[j] |= 1u128 << i;
    }

    fn check_pair(&self, i: usize, j: usize) -> Result<()> {
        for node in [i, j] {
            if node >= self.n {
                return Err(Error::NodeOutOfRange { node, n: self.n });
            }
        }
        if i == j {
            return Err(Error::SelfLoop(i));
        }
        Ok(())
    }
}

impl fmt::Debug for Graph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Graph").field("n", &self.n).field("edges", &self.edges().collect::<Vec<_>>()).finish()
    }
}

fn pair_from_rank(n: usize, mut rank: usize) -> Option<Edge> {
    for i in 0..n {
        let row = n - i - 1;
        if rank < row {
            return Some((i, i + 1 + rank));
        }
        rank -= row;
    }
    None
}

/// Edge-list wire form: `{"n":5,"edges":[[0,1],...]}`.
#[derive(Serialize, Deserialize)]
struct GraphJson {
    n: usize,
    edges: Vec<Edge>,
}

impl Serialize for Graph {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        GraphJson { n: self.n, edges: self.edges().collect() }.serialize(s)
    }
}

impl<'de> Deserialize<'de> for Graph {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let raw = GraphJson::deserialize(d)?;
        Graph::from_edges(raw.n, &raw.edges).map_err(serde::de::Error::custom)
    }
}

/// Per-node degrees in node order.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct DegreeSequence(pub Vec<usize>);

impl DegreeSequence {
    pub fn new(d: Vec<usize>) -> Self {
        DegreeSequence(d)
    }

    pub fn as_slice(&self) -> &[usize] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn sum(&self) -> usize {
        self.0.iter().sum()
    }

    pub fn has_even_sum(&self) -> bool {
        self.sum().is_multiple_of(2)
    }

    pub fn is_graphical(&self) -> bool {
        eg_check(&self.0)
    }
}

impl FromStr for DegreeSequence {
    type Err = Error;

    /// Parses `"1,1,1,2,3"` (whitespace tolerated).
    fn from_str(s: &str) -> Result<Self> {
        s.split(',')
            .map(|t| {
                t.trim().parse::<usize>().map_err(|_| Error::ParseDegreeSequence(format!("bad entry {:?}", t.trim())))
            })
            .collect::<Result<Vec<_>>>()
            .map(DegreeSequence)
    }
}

impl fmt::Display for DegreeSequence {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(|d| d.to_string()).collect();
        f.write_str(&parts.join(" "))
    }
}

/// Erdős–Gallai test: true iff some simple graph on `d.len()` labeled nodes has degrees `d`.
pub fn eg_check(d: &[usize]) -> bool {
    let n = d.len();
    if d.iter().any(|&x| x + 1 > n) {
        return false;
    }
    if d.iter().sum::<usize>() % 2 != 0 {
        return false;
    }
    let mut sorted = d.to_vec();
    sorted.sort_unstable_by(|a, b| b.cmp(a));
    let mut prefix = 0usize;
    for k in 1..=n {
        prefix += sorted[k - 1];
        let tail: usize = sorted[k..].iter().map(|&x| x.min(k)).sum();
        if prefix > k * (k - 1) + tail {
            return false;
        }
    }
    true
}

/// Havel–Hakimi realization with the exact (labeled) degree sequence `d`.
///
/// Repeatedly takes the node with the largest residual degree (lowest index
/// on ties) and joins it to the nodes with the next largest residuals (lowest
/// index on ties). Output is deterministic.
pub fn realize(d: &DegreeSequence) -> Result<Graph> {
    let n = d.len();
    check_n(n)?;
    if !d.is_graphical() {
        return Err(Error::NotGraphical);
    }
    let mut g = Graph::empty(n)?;
    let mut residual = d.0.clone();
    let by_residual = |residual: &[usize]| {
        let mut order: Vec<usize> = (0..n).collect();
        order.sort_by(|&a, &b| residual[b].cmp(&residual[a]).then(a.cmp(&b)));
        order
    };
    loop {
        let order = by_residual(&residual);
        let v = order[0];
        let need = residual[v];
        if need == 0 {
            break;
        }
        residual[v] = 0;
        let partners: Vec<usize> = order[1..].iter().copied().take(need).collect();
        for u in partners {
            if residual[u] == 0 {
                return Err(Error::NotGraphical);
            }
            residual[u] -= 1;
            g.insert(v, u)?;
        }
    }
    Ok(g)
}

fn enumeration_slots(n: usize, cap: usize) -> Result<usize> {
    check_n(n)?;
    let slots = pair_count(n);
    let cap = cap.min(ENUMERATION_CAP);
    if slots > cap {
        return Err(Error::EnumerationCap { n, slots, cap });
    }
    Ok(slots)
}

/// Every labeled graph on `n` nodes in increasing code order.
pub fn all_graphs(n: usize) -> Result<AllGraphs> {
    all_graphs_capped(n, ENUMERATION_CAP)
}

/// Like [`all_graphs`] with a caller-lowered slot cap; `cap` above the
/// default is clamped down to it.
pub fn all_graphs_capped(n: usize, cap: usize) -> Result<AllGraphs> {
    let slots = enumeration_slots(n, cap)?;
    Ok(AllGraphs { n, codes: 0..1u64 << slots })
}

/// Graphs whose codes fall in `codes`, for partitioned enumeration.
pub fn graphs_in_range(n: usize, codes: Range<u64>, cap: usize) -> Result<AllGraphs> {
    let slots = enumeration_slots(n, cap)?;
    let end = codes.end.min(1u64 << slots);
    Ok(AllGraphs { n, codes: codes.start.min(end)..end })
}

/// Number of labeled graphs on `n` nodes, subject to the enumeration cap.
pub fn graph_count(n: usize, cap: usize) -> Result<u64> {
    Ok(1u64 << enumeration_slots(n, cap)?)
}

#[derive(Debug, Clone)]
pub struct AllGraphs {
    n: usize,
    codes: Range<u64>,
}

impl Iterator for AllGraphs {
    type Item = Graph;

    fn next(&mut self) -> Option<Graph> {
        let code = self.codes.next()?;
        Some(Graph::from_code_u64(self.n, code).expect("code within slot range"))
    }

    fn size_hint(&self) -> (usize, Option<usize>) {
        self.codes.size_hint()
    }
}

impl ExactSizeIterator for AllGraphs {}
