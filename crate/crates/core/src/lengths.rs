//! Length sets of automata as finite unions of arithmetic progressions.
//!
//! The set `{ |w| : w ∈ L }` only depends on the unary projection of the
//! automaton. It is computed exactly in two parts:
//!
//! * below a threshold `T`, by stepping the set of states reachable in
//!   exactly `n` steps;
//! * from `T` on, per strongly connected component `C` that contains a cycle:
//!   with `d` the gcd of the cycle lengths of `C`, every residue modulo `d`
//!   of an accepting path through `C` is realized by all large enough lengths
//!   of that residue, because closed walks inside `C` reach every large
//!   multiple of `d`.
//!
//! Paths avoiding every cycle are shorter than `m` (the useful state count),
//! a shortest path with a given residue through `C` is shorter than `2·m·d`,
//! and closed walks at a vertex of `C` cover every multiple of `d` from
//! about `m²` on. Hence `T = 3m² + 2m` is safe.

use std::collections::VecDeque;

use num_integer::Integer;
use serde::Serialize;

use crate::automata::{AutomataError, LazyProduct, Nfa};

/// `{offset + r·period : r ≥ 0}`; period 0 is the singleton `{offset}`.
#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct Progression {
    pub offset: u64,
    pub period: u64,
}

impl Progression {
    pub fn singleton(n: u64) -> Self {
        Progression {
            offset: n,
            period: 0,
        }
    }

    pub fn contains(&self, n: u64) -> bool {
        if self.period == 0 {
            n == self.offset
        } else {
            n >= self.offset && (n - self.offset).is_multiple_of(self.period)
        }
    }

    // self ⊇ other
    fn covers(&self, other: &Progression) -> bool {
        if !self.contains(other.offset) {
            return false;
        }
        match (self.period, other.period) {
            (_, 0) => true,
            (0, _) => false,
            (c, d) => d % c == 0,
        }
    }
}

/// Normalized finite union of progressions: sorted, no member subsumed by
/// another.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct ProgressionSet {
    progressions: Vec<Progression>,
}

impl ProgressionSet {
    pub fn empty() -> Self {
        Self::default()
    }

    /// All naturals.
    pub fn all() -> Self {
        ProgressionSet {
            progressions: vec![Progression {
                offset: 0,
                period: 1,
            }],
        }
    }

    pub fn from_progressions(ps: impl IntoIterator<Item = Progression>) -> Self {
        let mut s = ProgressionSet {
            progressions: ps.into_iter().collect(),
        };
        s.normalize();
        s
    }

    pub fn progressions(&self) -> &[Progression] {
        &self.progressions
    }

    pub fn is_empty(&self) -> bool {
        self.progressions.is_empty()
    }

    pub fn contains(&self, n: u64) -> bool {
        self.progressions.iter().any(|p| p.contains(n))
    }

    pub fn min(&self) -> Option<u64> {
        self.progressions.iter().map(|p| p.offset).min()
    }

    /// Largest element, `None` if empty or infinite.
    pub fn max(&self) -> Option<u64> {
        if self.progressions.iter().any(|p| p.period > 0) {
            return None;
        }
        self.progressions.iter().map(|p| p.offset).max()
    }

    pub fn is_finite(&self) -> bool {
        self.progressions.iter().all(|p| p.period == 0)
    }

    fn normalize(&mut self) {
        let ps = &mut self.progressions;
        ps.sort();
        ps.dedup();
        // Pull periodic progressions down over singletons they continue.
        loop {
            let mut changed = false;
            for i in 0..ps.len() {
                let Progression { offset, period } = ps[i];
                if period == 0 || offset < period {
                    continue;
                }
                let below = Progression::singleton(offset - period);
                if let Some(j) = ps.iter().position(|p| *p == below) {
                    ps[i].offset -= period;
                    ps.remove(j);
                    changed = true;
                    break;
                }
            }
            if !changed {
                break;
            }
        }
        ps.sort();
        ps.dedup();
        let snapshot = ps.clone();
        ps.retain(|p| {
            !snapshot
                .iter()
                .any(|q| q != p && q.covers(p) && !(p.covers(q) && q > p))
        });
    }
}

/// Membership of `n` in `s`.
pub fn progression_member(s: &ProgressionSet, n: u64) -> bool {
    s.contains(n)
}

/// Unlabelled transition graph of an automaton restricted to useful states
/// (reachable from the initial state and co-reachable to a final state).
#[derive(Clone, Debug)]
pub struct UnaryGraph {
    initial: usize,
    finals: Vec<bool>,
    succ: Vec<Vec<usize>>,
}

impl UnaryGraph {
    fn build(initial: usize, finals: Vec<bool>, succ: Vec<Vec<usize>>) -> Self {
        let n = finals.len();
        let reach = bfs(initial, &succ);
        let mut pred = vec![Vec::new(); n];
        for (p, qs) in succ.iter().enumerate() {
            for &q in qs {
                pred[q].push(p);
            }
        }
        let mut co = vec![false; n];
        let mut queue: VecDeque<usize> = (0..n).filter(|&q| finals[q]).collect();
        for &q in &queue {
            co[q] = true;
        }
        while let Some(q) = queue.pop_front() {
            for &p in &pred[q] {
                if !co[p] {
                    co[p] = true;
                    queue.push_back(p);
                }
            }
        }
        let useful: Vec<bool> = (0..n).map(|q| reach[q] && co[q]).collect();
        if !useful[initial] {
            return UnaryGraph {
                initial: 0,
                finals: vec![false],
                succ: vec![Vec::new()],
            };
        }
        let mut map = vec![usize::MAX; n];
        let mut order = Vec::new();
        for q in 0..n {
            if useful[q] {
                map[q] = order.len();
                order.push(q);
            }
        }
        let succ = order
            .iter()
            .map(|&p| {
                let mut qs: Vec<usize> = succ[p]
                    .iter()
                    .filter(|&&q| useful[q])
                    .map(|&q| map[q])
                    .collect();
                qs.sort_unstable();
                qs.dedup();
                qs
            })
            .collect();
        UnaryGraph {
            initial: map[initial],
            finals: order.iter().map(|&q| finals[q]).collect(),
            succ,
        }
    }

    pub fn from_nfa(m: &Nfa) -> Self {
        let succ = (0..m.num_states() as u32)
            .map(|p| {
                (0..m.alphabet().len())
                    .flat_map(|a| m.successors(p, a).iter().map(|&q| q as usize))
                    .collect()
            })
            .collect();
        let finals = (0..m.num_states() as u32).map(|q| m.is_final(q)).collect();
        UnaryGraph::build(m.initial() as usize, finals, succ)
    }

    /// Explores every reachable tuple of `p`.
    pub fn from_product(p: &mut LazyProduct) -> Result<Self, AutomataError> {
        let order = p.explore()?;
        let mut map = std::collections::HashMap::new();
        for (i, &s) in order.iter().enumerate() {
            map.insert(s, i);
        }
        let mut succ = Vec::with_capacity(order.len());
        for &s in &order {
            let mut qs = Vec::new();
            for a in 0..p.alphabet().len() {
                qs.extend(p.successors(s, a)?.iter().map(|t| map[t]));
            }
            succ.push(qs);
        }
        let finals = order.iter().map(|&s| p.is_final(s)).collect();
        Ok(UnaryGraph::build(map[&p.start()], finals, succ))
    }

    /// Number of useful states (0 for an empty language).
    pub fn num_states(&self) -> usize {
        if self.finals.iter().any(|&f| f) {
            self.finals.len()
        } else {
            0
        }
    }

    /// Exact lengths up to `max_len`, by stepping reachable sets. The
    /// sequence of sets is eventually periodic, so stepping stops at the
    /// first repeated set and the rest is read off the cycle.
    pub fn lengths_up_to(&self, max_len: u64) -> Vec<u64> {
        let n = self.finals.len();
        if self.num_states() == 0 {
            return Vec::new();
        }
        let mut accept: Vec<bool> = Vec::new();
        let mut seen: std::collections::HashMap<Vec<bool>, u64> = std::collections::HashMap::new();
        let mut cur = vec![false; n];
        cur[self.initial] = true;
        let mut cycle = None;
        for len in 0..=max_len {
            if let Some(&first) = seen.get(&cur) {
                cycle = Some((first, len - first));
                break;
            }
            accept.push((0..n).any(|q| cur[q] && self.finals[q]));
            let mut next = vec![false; n];
            for p in 0..n {
                if cur[p] {
                    for &q in &self.succ[p] {
                        next[q] = true;
                    }
                }
            }
            seen.insert(std::mem::replace(&mut cur, next), len);
        }
        (0..=max_len)
            .filter(|&len| match cycle {
                Some((first, period)) if len >= first + period => {
                    accept[(first + (len - first) % period) as usize]
                }
                _ => (len as usize) < accept.len() && accept[len as usize],
            })
            .collect()
    }

    fn sccs(&self) -> Vec<Vec<usize>> {
        // iterative Tarjan
        let n = self.finals.len();
        let mut index = vec![usize::MAX; n];
        let mut low = vec![0; n];
        let mut on_stack = vec![false; n];
        let mut stack = Vec::new();
        let mut out = Vec::new();
        let mut counter = 0;
        for root in 0..n {
            if index[root] != usize::MAX {
                continue;
            }
            let mut call: Vec<(usize, usize)> = vec![(root, 0)];
            index[root] = counter;
            low[root] = counter;
            counter += 1;
            stack.push(root);
            on_stack[root] = true;
            while let Some(&mut (v, ref mut i)) = call.last_mut() {
                if *i < self.succ[v].len() {
                    let w = self.succ[v][*i];
                    *i += 1;
                    if index[w] == usize::MAX {
                        index[w] = counter;
                        low[w] = counter;
                        counter += 1;
                        stack.push(w);
                        on_stack[w] = true;
                        call.push((w, 0));
                    } else if on_stack[w] {
                        low[v] = low[v].min(index[w]);
                    }
                } else {
                    call.pop();
                    if let Some(&(u, _)) = call.last() {
                        low[u] = low[u].min(low[v]);
                    }
                    if low[v] == index[v] {
                        let mut comp = Vec::new();
                        loop {
                            let w = stack.pop().expect("tarjan stack");
                            on_stack[w] = false;
                            comp.push(w);
                            if w == v {
                                break;
                            }
                        }
                        out.push(comp);
                    }
                }
            }
        }
        out
    }

    // gcd of cycle lengths of a strongly connected component, 0 if it has
    // no cycle.
    fn period(&self, comp: &[usize], in_comp: &[bool]) -> u64 {
        let root = comp[0];
        let mut level = vec![u64::MAX; self.finals.len()];
        level[root] = 0;
        let mut queue = VecDeque::from([root]);
        let mut g = 0u64;
        while let Some(u) = queue.pop_front() {
            for &v in &self.succ[u] {
                if !in_comp[v] {
                    continue;
                }
                if level[v] == u64::MAX {
                    level[v] = level[u] + 1;
                    queue.push_back(v);
                } else {
                    g = g.gcd(&(level[u] + 1).abs_diff(level[v]));
                }
            }
        }
        g
    }

    // Residues modulo `d` of accepting path lengths that visit `comp`.
    fn residues_through(&self, in_comp: &[bool], d: u64) -> Vec<u64> {
        let n = self.finals.len();
        let d = d as usize;
        let idx = |q: usize, r: usize, v: bool| (q * d + r) * 2 + v as usize;
        let mut seen = vec![false; n * d * 2];
        let start = idx(self.initial, 0, in_comp[self.initial]);
        seen[start] = true;
        let mut queue = VecDeque::from([(self.initial, 0usize, in_comp[self.initial])]);
        let mut res = vec![false; d];
        while let Some((q, r, v)) = queue.pop_front() {
            if v && self.finals[q] {
                res[r] = true;
            }
            for &q2 in &self.succ[q] {
                let s = (q2, (r + 1) % d, v || in_comp[q2]);
                let k = idx(s.0, s.1, s.2);
                if !seen[k] {
                    seen[k] = true;
                    queue.push_back(s);
                }
            }
        }
        (0..d as u64).filter(|&r| res[r as usize]).collect()
    }

    /// Shortest accepting path through each state lying on a cycle, paired
    /// with the shortest cycle through it. Every such progression consists
    /// of accepted lengths, but their union may miss lengths obtained by
    /// combining several cycles.
    pub fn cycle_candidates(&self) -> Vec<Progression> {
        let n = self.num_states();
        if n == 0 {
            return Vec::new();
        }
        let dist_from = |s: usize| {
            let mut d = vec![u64::MAX; n];
            d[s] = 0;
            let mut queue = VecDeque::from([s]);
            while let Some(u) = queue.pop_front() {
                for &v in &self.succ[u] {
                    if d[v] == u64::MAX {
                        d[v] = d[u] + 1;
                        queue.push_back(v);
                    }
                }
            }
            d
        };
        let from_init = dist_from(self.initial);
        let mut out = Vec::new();
        for q in 0..n {
            let from_q = dist_from(q);
            let to_final = (0..n)
                .filter(|&f| self.finals[f])
                .map(|f| from_q[f])
                .min()
                .unwrap_or(u64::MAX);
            let cycle = (0..n)
                .filter(|&p| self.succ[p].contains(&q) && from_q[p] != u64::MAX)
                .map(|p| from_q[p] + 1)
                .min();
            if let Some(c) = cycle {
                out.push(Progression {
                    offset: from_init[q] + to_final,
                    period: c,
                });
            }
        }
        out
    }
}

fn bfs(start: usize, succ: &[Vec<usize>]) -> Vec<bool> {
    let mut seen = vec![false; succ.len()];
    seen[start] = true;
    let mut queue = VecDeque::from([start]);
    while let Some(u) = queue.pop_front() {
        for &v in &succ[u] {
            if !seen[v] {
                seen[v] = true;
                queue.push_back(v);
            }
        }
    }
    seen
}

/// Exactness threshold for a graph with `m` useful states.
pub fn threshold(m: usize) -> u64 {
    let m = m as u64;
    3 * m * m + 2 * m
}

/// Exact length set of the automaton underlying `g`.
pub fn length_abstraction(g: &UnaryGraph) -> ProgressionSet {
    let m = g.num_states();
    if m == 0 {
        return ProgressionSet::empty();
    }
    let t = threshold(m);
    let mut ps: Vec<Progression> = g
        .lengths_up_to(t.saturating_sub(1))
        .into_iter()
        .map(Progression::singleton)
        .collect();
    let mut in_comp = vec![false; g.finals.len()];
    for comp in g.sccs() {
        for &q in &comp {
            in_comp[q] = true;
        }
        let d = g.period(&comp, &in_comp);
        if d > 0 {
            for r in g.residues_through(&in_comp, d) {
                // smallest n ≥ t with n ≡ r (mod d)
                let offset = t + (r + d - t % d) % d;
                ps.push(Progression { offset, period: d });
            }
        }
        for &q in &comp {
            in_comp[q] = false;
        }
    }
    ProgressionSet::from_progressions(ps)
}

pub fn nfa_length_abstraction(m: &Nfa) -> ProgressionSet {
    length_abstraction(&UnaryGraph::from_nfa(m))
}

pub fn product_length_abstraction(p: &mut LazyProduct) -> Result<ProgressionSet, AutomataError> {
    Ok(length_abstraction(&UnaryGraph::from_product(p)?))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::automata::compile_regex;
    use crate::frontend::{Alphabet, Regex};

    fn of(r: Regex) -> ProgressionSet {
        nfa_length_abstraction(&compile_regex(&r, &Alphabet::new(['a', 'b'])).unwrap())
    }

    #[test]
    fn odd_lengths() {
        let s = of(Regex::concat(Regex::lit('a'), Regex::star(Regex::word("aa"))));
        assert_eq!(
            s.progressions(),
            &[Progression {
                offset: 1,
                period: 2
            }]
        );
        assert!(progression_member(&s, 7));
        assert!(!progression_member(&s, 4));
    }

    #[test]
    fn all_lengths_and_empty() {
        assert_eq!(of(Regex::star(Regex::lit('a'))), ProgressionSet::all());
        assert!(of(Regex::Empty).is_empty());
        assert_eq!(
            of(Regex::word("ab")).progressions(),
            &[Progression::singleton(2)]
        );
    }

    #[test]
    fn two_cycles_through_one_state() {
        // (aa ∪ aaa)*: every length except 1
        let s = of(Regex::star(Regex::union(Regex::word("aa"), Regex::word("aaa"))));
        for n in 0..60 {
            assert_eq!(s.contains(n), n != 1, "{n}");
        }
    }

    #[test]
    fn per_state_candidates_can_miss_lengths() {
        // cycles of length 2 and 3 through the initial, final state
        let mut m = Nfa::new(Alphabet::new(['a']), 4, 0);
        m.set_final(0, true);
        for (p, q) in [(0, 1), (1, 0), (0, 2), (2, 3), (3, 0)] {
            m.add_transition(p, 0, q);
        }
        let g = UnaryGraph::from_nfa(&m);
        let cands = ProgressionSet::from_progressions(g.cycle_candidates());
        let exact = g.lengths_up_to(40);
        for n in 0..=40 {
            if cands.contains(n) {
                assert!(exact.contains(&n), "candidate {n} is not a length");
            }
        }
        assert!(exact.contains(&5) && !cands.contains(5));
        let s = length_abstraction(&g);
        for n in 0..=40 {
            assert_eq!(s.contains(n), exact.contains(&n), "{n}");
        }
    }
}
