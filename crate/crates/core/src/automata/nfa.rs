use std::collections::VecDeque;
use std::fmt::Write as _;

use crate::frontend::Alphabet;

use super::AutomataError;

/// ε-free nondeterministic automaton with a single initial state.
///
/// Transitions are stored per state and per symbol index as sorted,
/// duplicate-free successor lists.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Nfa {
    alphabet: Alphabet,
    initial: u32,
    finals: Vec<bool>,
    delta: Vec<Vec<Vec<u32>>>,
}

impl Nfa {
    /// `n` states, none final, no transitions.
    pub fn new(alphabet: Alphabet, n: usize, initial: u32) -> Self {
        assert!((initial as usize) < n, "initial state out of range");
        let k = alphabet.len();
        Nfa {
            alphabet,
            initial,
            finals: vec![false; n],
            delta: vec![vec![Vec::new(); k]; n],
        }
    }

    /// One non-final state, no transitions.
    pub fn empty(alphabet: Alphabet) -> Self {
        Nfa::new(alphabet, 1, 0)
    }

    /// One final state looping on every symbol.
    pub fn universal(alphabet: Alphabet) -> Self {
        let mut m = Nfa::new(alphabet, 1, 0);
        m.set_final(0, true);
        for a in 0..m.alphabet.len() {
            m.add_transition(0, a, 0);
        }
        m
    }

    pub fn add_state(&mut self) -> u32 {
        self.finals.push(false);
        self.delta.push(vec![Vec::new(); self.alphabet.len()]);
        (self.finals.len() - 1) as u32
    }

    pub fn add_transition(&mut self, p: u32, sym: usize, q: u32) {
        assert!((q as usize) < self.finals.len(), "target state out of range");
        let succ = &mut self.delta[p as usize][sym];
        if let Err(i) = succ.binary_search(&q) {
            succ.insert(i, q);
        }
    }

    pub fn set_final(&mut self, q: u32, fin: bool) {
        self.finals[q as usize] = fin;
    }

    pub fn set_initial(&mut self, q: u32) {
        self.initial = q;
    }

    pub fn alphabet(&self) -> &Alphabet {
        &self.alphabet
    }

    pub fn num_states(&self) -> usize {
        self.finals.len()
    }

    pub fn initial(&self) -> u32 {
        self.initial
    }

    pub fn is_final(&self, q: u32) -> bool {
        self.finals[q as usize]
    }

    pub fn finals(&self) -> impl Iterator<Item = u32> + '_ {
        (0..self.finals.len() as u32).filter(|&q| self.finals[q as usize])
    }

    pub fn successors(&self, q: u32, sym: usize) -> &[u32] {
        &self.delta[q as usize][sym]
    }

    /// All transitions `(p, symbol index, q)`.
    pub fn transitions(&self) -> impl Iterator<Item = (u32, usize, u32)> + '_ {
        self.delta.iter().enumerate().flat_map(|(p, row)| {
            row.iter()
                .enumerate()
                .flat_map(move |(a, qs)| qs.iter().map(move |&q| (p as u32, a, q)))
        })
    }

    pub fn num_transitions(&self) -> usize {
        self.delta.iter().flatten().map(Vec::len).sum()
    }

    pub fn is_deterministic(&self) -> bool {
        self.delta.iter().flatten().all(|qs| qs.len() <= 1)
    }

    pub fn is_complete(&self) -> bool {
        self.delta.iter().flatten().all(|qs| !qs.is_empty())
    }

    /// Membership by subset simulation.
    pub fn accepts(&self, w: &str) -> Result<bool, AutomataError> {
        let mut syms = Vec::with_capacity(w.len());
        for c in w.chars() {
            syms.push(
                self.alphabet
                    .index_of(c)
                    .ok_or(AutomataError::ForeignSymbol(c))?,
            );
        }
        Ok(self.accepts_symbols(&syms))
    }

    pub fn accepts_symbols(&self, w: &[usize]) -> bool {
        let end = self.run_from(self.initial, w);
        end.iter().any(|&q| self.finals[q as usize])
    }

    /// States reachable from `q` by reading `w`, sorted.
    pub fn run_from(&self, q: u32, w: &[usize]) -> Vec<u32> {
        let n = self.num_states();
        let mut cur = vec![q];
        let mut mark = vec![false; n];
        for &a in w {
            let mut next = Vec::new();
            for &p in &cur {
                for &r in &self.delta[p as usize][a] {
                    if !mark[r as usize] {
                        mark[r as usize] = true;
                        next.push(r);
                    }
                }
            }
            for &r in &next {
                mark[r as usize] = false;
            }
            next.sort_unstable();
            cur = next;
            if cur.is_empty() {
                break;
            }
        }
        cur
    }

    /// States reachable from `q` (including `q`).
    pub fn reachable_from(&self, q: u32) -> Vec<bool> {
        let mut seen = vec![false; self.num_states()];
        seen[q as usize] = true;
        let mut queue = VecDeque::from([q]);
        while let Some(p) = queue.pop_front() {
            for qs in &self.delta[p as usize] {
                for &r in qs {
                    if !seen[r as usize] {
                        seen[r as usize] = true;
                        queue.push_back(r);
                    }
                }
            }
        }
        seen
    }

    /// `reach[p][q]`: some path (possibly empty) leads from `p` to `q`.
    pub fn reachability_matrix(&self) -> Vec<Vec<bool>> {
        (0..self.num_states() as u32)
            .map(|p| self.reachable_from(p))
            .collect()
    }

    /// States from which a final state is reachable.
    pub fn coreachable(&self) -> Vec<bool> {
        let n = self.num_states();
        let mut rev: Vec<Vec<u32>> = vec![Vec::new(); n];
        for (p, _, q) in self.transitions() {
            rev[q as usize].push(p);
        }
        let mut seen = self.finals.clone();
        let mut queue: VecDeque<u32> = self.finals().collect();
        while let Some(q) = queue.pop_front() {
            for &p in &rev[q as usize] {
                if !seen[p as usize] {
                    seen[p as usize] = true;
                    queue.push_back(p);
                }
            }
        }
        seen
    }

    /// Removes states that are unreachable or cannot reach a final state.
    /// The initial state is always kept; an empty language yields a single
    /// non-final state.
    pub fn trim(&self) -> Nfa {
        let reach = self.reachable_from(self.initial);
        let co = self.coreachable();
        if !co[self.initial as usize] {
            return Nfa::empty(self.alphabet.clone());
        }
        let mut map = vec![u32::MAX; self.num_states()];
        let mut order = vec![self.initial];
        map[self.initial as usize] = 0;
        for q in 0..self.num_states() as u32 {
            if q != self.initial && reach[q as usize] && co[q as usize] {
                map[q as usize] = order.len() as u32;
                order.push(q);
            }
        }
        let mut out = Nfa::new(self.alphabet.clone(), order.len(), 0);
        for (new, &old) in order.iter().enumerate() {
            out.finals[new] = self.finals[old as usize];
            for (a, qs) in self.delta[old as usize].iter().enumerate() {
                for &r in qs {
                    if map[r as usize] != u32::MAX {
                        out.delta[new][a].push(map[r as usize]);
                    }
                }
                out.delta[new][a].sort_unstable();
            }
        }
        out
    }

    /// Quotient by the coarsest forward bisimulation: states with equal
    /// finality whose successor sets hit the same blocks on every symbol are
    /// merged. The language is unchanged.
    pub fn reduce(&self) -> Nfa {
        let n = self.num_states();
        let mut block: Vec<u32> = self.finals.iter().map(|&f| f as u32).collect();
        let mut count = 0;
        loop {
            let mut sig_index: std::collections::HashMap<(u32, Vec<Vec<u32>>), u32> =
                std::collections::HashMap::new();
            let mut next = vec![0u32; n];
            for q in 0..n {
                let sig: Vec<Vec<u32>> = self.delta[q]
                    .iter()
                    .map(|qs| {
                        let mut bs: Vec<u32> = qs.iter().map(|&r| block[r as usize]).collect();
                        bs.sort_unstable();
                        bs.dedup();
                        bs
                    })
                    .collect();
                let len = sig_index.len() as u32;
                next[q] = *sig_index.entry((block[q], sig)).or_insert(len);
            }
            let new_count = sig_index.len();
            block = next;
            if new_count == count {
                break;
            }
            count = new_count;
        }
        // renumber so that the initial state's block is 0
        let mut map = vec![u32::MAX; count];
        map[block[self.initial as usize] as usize] = 0;
        let mut k = 1;
        for q in 0..n {
            let b = block[q] as usize;
            if map[b] == u32::MAX {
                map[b] = k;
                k += 1;
            }
        }
        let mut out = Nfa::new(self.alphabet.clone(), count, 0);
        for q in 0..n {
            let b = map[block[q] as usize];
            out.finals[b as usize] = self.finals[q];
            for (a, qs) in self.delta[q].iter().enumerate() {
                for &r in qs {
                    out.add_transition(b, a, map[block[r as usize] as usize]);
                }
            }
        }
        out
    }

    /// Graphviz rendering: final states are drawn with a double circle and
    /// parallel edges are merged into one label.
    pub fn to_dot(&self, name: &str) -> String {
        let mut s = String::new();
        let _ = writeln!(s, "digraph \"{}\" {{", name.replace('"', "\\\""));
        let _ = writeln!(s, "  rankdir=LR;");
        let _ = writeln!(s, "  __start [shape=point];");
        for q in 0..self.num_states() {
            let shape = if self.finals[q] { "doublecircle" } else { "circle" };
            let _ = writeln!(s, "  q{q} [shape={shape}];");
        }
        let _ = writeln!(s, "  __start -> q{};", self.initial);
        for p in 0..self.num_states() {
            let mut by_target: Vec<(u32, Vec<char>)> = Vec::new();
            for (a, qs) in self.delta[p].iter().enumerate() {
                for &q in qs {
                    match by_target.iter_mut().find(|(t, _)| *t == q) {
                        Some((_, cs)) => cs.push(self.alphabet.symbol(a)),
                        None => by_target.push((q, vec![self.alphabet.symbol(a)])),
                    }
                }
            }
            for (q, cs) in by_target {
                let label: Vec<String> = cs.iter().map(|c| c.escape_default().to_string()).collect();
                let _ = writeln!(s, "  q{p} -> q{q} [label=\"{}\"];", label.join(","));
            }
        }
        s.push_str("}\n");
        s
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn a_bstar() -> Nfa {
        let mut m = Nfa::new(Alphabet::new(['a', 'b']), 2, 0);
        m.add_transition(0, 0, 1);
        m.add_transition(1, 1, 1);
        m.set_final(1, true);
        m
    }

    #[test]
    fn membership() {
        let m = a_bstar();
        assert!(m.accepts("abb").unwrap());
        assert!(!m.accepts("").unwrap());
        assert!(!m.accepts("ba").unwrap());
        assert_eq!(m.accepts("ac"), Err(AutomataError::ForeignSymbol('c')));
    }

    #[test]
    fn trim_drops_dead_states() {
        let mut m = a_bstar();
        let dead = m.add_state();
        m.add_transition(0, 1, dead);
        let t = m.trim();
        assert_eq!(t.num_states(), 2);
        assert!(t.accepts("ab").unwrap());
        let e = Nfa::new(Alphabet::new(['a']), 3, 0).trim();
        assert_eq!(e.num_states(), 1);
        assert!(!e.is_final(0));
    }

    #[test]
    fn dot_mentions_every_state() {
        let dot = a_bstar().to_dot("m");
        assert!(dot.contains("q1 [shape=doublecircle]"));
        assert!(dot.contains("q0 -> q1 [label=\"a\"]"));
    }
}
