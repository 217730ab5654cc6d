//! Maximum weight independent set by branch and bound over clique groups.
//!
//! Nodes are partitioned into groups that are cliques of the conflict graph
//! (for packings: all candidates sharing an anchor). The search picks at most
//! one node per group; the bound adds, for every undecided group, the heaviest
//! node not yet excluded.

use num_traits::Zero;

use crate::geometry::{to_f64, Rational};

#[derive(Debug, Clone)]
pub struct ConflictGraph {
    weights: Vec<Rational>,
    wf: Vec<f64>,
    group: Vec<usize>,
    adj: Vec<Vec<u32>>,
}

impl ConflictGraph {
    pub fn new(weights: Vec<Rational>, group: Vec<usize>) -> Self {
        assert_eq!(weights.len(), group.len());
        let wf = weights.iter().map(to_f64).collect();
        let adj = vec![Vec::new(); weights.len()];
        let mut g = ConflictGraph { weights, wf, group, adj };
        // Same group means conflict.
        let n = g.len();
        let mut by_group: std::collections::BTreeMap<usize, Vec<usize>> = Default::default();
        for i in 0..n {
            by_group.entry(g.group[i]).or_default().push(i);
        }
        for members in by_group.values() {
            for (k, &a) in members.iter().enumerate() {
                for &b in &members[k + 1..] {
                    g.adj[a].push(b as u32);
                    g.adj[b].push(a as u32);
                }
            }
        }
        g
    }

    pub fn len(&self) -> usize {
        self.weights.len()
    }

    pub fn is_empty(&self) -> bool {
        self.weights.is_empty()
    }

    pub fn weight(&self, i: usize) -> &Rational {
        &self.weights[i]
    }

    pub fn group(&self, i: usize) -> usize {
        self.group[i]
    }

    /// Adds an edge between nodes of different groups.
    pub fn add_conflict(&mut self, a: usize, b: usize) {
        if a != b && self.group[a] != self.group[b] {
            self.adj[a].push(b as u32);
            self.adj[b].push(a as u32);
        }
    }

    pub fn conflicts(&self, a: usize, b: usize) -> bool {
        a == b || self.group[a] == self.group[b] || self.adj[a].contains(&(b as u32))
    }

    pub fn edge_count(&self) -> usize {
        self.adj.iter().map(|v| v.len()).sum::<usize>() / 2
    }

    pub fn is_independent(&self, set: &[usize]) -> bool {
        set.iter()
            .enumerate()
            .all(|(k, &a)| set[k + 1..].iter().all(|&b| !self.conflicts(a, b)))
    }

    pub fn value(&self, set: &[usize]) -> Rational {
        set.iter().map(|&i| &self.weights[i]).sum()
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MwisSolution {
    pub chosen: Vec<usize>,
    pub value: Rational,
    /// False when the node budget ran out before the search finished.
    pub optimal: bool,
    pub nodes: u64,
}

struct Search<'a> {
    g: &'a ConflictGraph,
    groups: Vec<Vec<usize>>,
    blocked: Vec<u32>,
    chosen: Vec<usize>,
    cur: Rational,
    cur_f: f64,
    best: Vec<usize>,
    best_val: Rational,
    best_f: f64,
    nodes: u64,
    limit: u64,
    aborted: bool,
}

impl Search<'_> {
    fn slack(&self) -> f64 {
        1e-9 * (1.0 + self.best_f.abs())
    }

    fn record(&mut self) {
        if self.cur_f + self.slack() >= self.best_f && self.cur > self.best_val {
            self.best_val = self.cur.clone();
            self.best_f = self.cur_f;
            self.best = self.chosen.clone();
        }
    }

    fn bound(&self, from: usize) -> f64 {
        let mut b = self.cur_f;
        for grp in &self.groups[from..] {
            if let Some(&i) = grp.iter().find(|&&i| self.blocked[i] == 0) {
                b += self.g.wf[i];
            }
        }
        b
    }

    fn take(&mut self, i: usize) {
        self.blocked[i] += 1;
        for &j in &self.g.adj[i] {
            self.blocked[j as usize] += 1;
        }
        self.chosen.push(i);
        self.cur += &self.g.weights[i];
        self.cur_f += self.g.wf[i];
    }

    fn untake(&mut self, i: usize) {
        self.blocked[i] -= 1;
        for &j in &self.g.adj[i] {
            self.blocked[j as usize] -= 1;
        }
        self.chosen.pop();
        self.cur -= &self.g.weights[i];
        self.cur_f -= self.g.wf[i];
    }

    fn run(&mut self, gi: usize) {
        self.nodes += 1;
        if self.nodes > self.limit {
            self.aborted = true;
            return;
        }
        self.record();
        if gi == self.groups.len() {
            return;
        }
        if self.bound(gi) + self.slack() < self.best_f {
            return;
        }
        let members = self.groups[gi].clone();
        for &i in &members {
            if self.blocked[i] != 0 {
                continue;
            }
            self.take(i);
            self.run(gi + 1);
            self.untake(i);
            if self.aborted {
                return;
            }
            if self.bound(gi) + self.slack() < self.best_f {
                return;
            }
        }
        self.run(gi + 1);
    }
}

/// Exact maximum weight independent set, unless `node_limit` is hit first.
///
/// `start` seeds the incumbent (it must be independent).
pub fn solve(g: &ConflictGraph, node_limit: Option<u64>, start: Option<&[usize]>) -> MwisSolution {
    let mut by_group: std::collections::BTreeMap<usize, Vec<usize>> = Default::default();
    for i in 0..g.len() {
        if g.weights[i].is_zero() {
            continue;
        }
        by_group.entry(g.group[i]).or_default().push(i);
    }
    let mut groups: Vec<Vec<usize>> = by_group.into_values().collect();
    for grp in &mut groups {
        grp.sort_by(|&a, &b| g.weights[b].cmp(&g.weights[a]).then(a.cmp(&b)));
    }
    groups.sort_by(|a, b| g.weights[b[0]].cmp(&g.weights[a[0]]).then(a[0].cmp(&b[0])));
    let (best, best_val) = match start {
        Some(s) => {
            debug_assert!(g.is_independent(s));
            (s.to_vec(), g.value(s))
        }
        None => (Vec::new(), Rational::zero()),
    };
    let best_f = to_f64(&best_val);
    let mut s = Search {
        g,
        groups,
        blocked: vec![0; g.len()],
        chosen: Vec::new(),
        cur: Rational::zero(),
        cur_f: 0.0,
        best,
        best_val,
        best_f,
        nodes: 0,
        limit: node_limit.unwrap_or(u64::MAX),
        aborted: false,
    };
    s.run(0);
    let mut chosen = s.best;
    chosen.sort_unstable();
    MwisSolution { chosen, value: s.best_val, optimal: !s.aborted, nodes: s.nodes }
}

/// Exhaustive search over all subsets; only for tiny graphs.
pub fn brute_force(g: &ConflictGraph) -> MwisSolution {
    let n = g.len();
    assert!(n <= 24, "brute force over {n} nodes");
    let mut best = (Rational::zero(), Vec::new());
    for mask in 0u32..(1u32 << n) {
        let set: Vec<usize> = (0..n).filter(|&i| mask >> i & 1 == 1).collect();
        if g.is_independent(&set) {
            let v = g.value(&set);
            if v > best.0 {
                best = (v, set);
            }
        }
    }
    MwisSolution { chosen: best.1, value: best.0, optimal: true, nodes: 1 << n }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::{int, rat};
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn single_clique_takes_heaviest() {
        let g = ConflictGraph::new(vec![rat(1, 4), rat(3, 4), rat(1, 2)], vec![0, 0, 0]);
        let s = solve(&g, None, None);
        assert_eq!(s.chosen, vec![1]);
        assert_eq!(s.value, rat(3, 4));
    }

    #[test]
    fn path_graph() {
        let mut g = ConflictGraph::new(vec![int(2), int(3), int(2)], vec![0, 1, 2]);
        g.add_conflict(0, 1);
        g.add_conflict(1, 2);
        let s = solve(&g, None, None);
        assert_eq!(s.value, int(4));
        assert_eq!(s.chosen, vec![0, 2]);
    }

    #[test]
    fn matches_brute_force_on_random_graphs() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..200 {
            let n = rng.gen_range(1..=14);
            let weights: Vec<Rational> = (0..n).map(|_| rat(rng.gen_range(0..20), rng.gen_range(1..9))).collect();
            let groups: Vec<usize> = (0..n).map(|_| rng.gen_range(0..5)).collect();
            let mut g = ConflictGraph::new(weights, groups);
            for a in 0..n {
                for b in a + 1..n {
                    if rng.gen_bool(0.3) {
                        g.add_conflict(a, b);
                    }
                }
            }
            let s = solve(&g, None, None);
            assert!(g.is_independent(&s.chosen));
            assert_eq!(s.value, brute_force(&g).value);
        }
    }

    #[test]
    fn node_limit_keeps_incumbent() {
        let g = ConflictGraph::new(vec![int(1), int(2)], vec![0, 1]);
        let s = solve(&g, Some(1), Some(&[0]));
        assert!(!s.optimal);
        assert!(s.value >= int(1));
    }
}
