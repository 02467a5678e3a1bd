//! Implicit intersection of automata, expanded on demand.

use std::collections::{HashMap, VecDeque};
use std::sync::Arc;

use crate::frontend::Alphabet;

use super::{AutomataError, Nfa, DEFAULT_STATE_BUDGET};

/// How a member automaton takes part in the product.
#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash)]
pub enum Mode {
    AsIs,
    /// Simulated through its subset automaton.
    Determinized,
    /// Subset automaton with final states flipped: accepts the complement.
    DeterminizedComplemented,
}

/// A member of a product: an automaton, its mode and optional start/end
/// overrides. With an end override, that single state is the only final one.
#[derive(Clone, Debug)]
pub struct Member {
    pub nfa: Arc<Nfa>,
    pub mode: Mode,
    pub start: Option<u32>,
    pub end: Option<u32>,
}

impl Member {
    pub fn new(nfa: Arc<Nfa>, mode: Mode) -> Self {
        Member {
            nfa,
            mode,
            start: None,
            end: None,
        }
    }

    pub fn between(nfa: Arc<Nfa>, start: u32, end: u32) -> Self {
        Member {
            nfa,
            mode: Mode::AsIs,
            start: Some(start),
            end: Some(end),
        }
    }
}

struct MemberState {
    member: Member,
    end_mask: Vec<bool>,
    subsets: Vec<Vec<u32>>,
    subset_index: HashMap<Vec<u32>, u32>,
    subset_succ: Vec<Option<Vec<u32>>>,
}

impl MemberState {
    fn new(member: Member) -> Self {
        let n = member.nfa.num_states();
        let end_mask = match member.end {
            Some(f) => (0..n as u32).map(|q| q == f).collect(),
            None => (0..n as u32).map(|q| member.nfa.is_final(q)).collect(),
        };
        MemberState {
            member,
            end_mask,
            subsets: Vec::new(),
            subset_index: HashMap::new(),
            subset_succ: Vec::new(),
        }
    }

    fn intern(&mut self, set: Vec<u32>, budget: usize) -> Result<u32, AutomataError> {
        if let Some(&id) = self.subset_index.get(&set) {
            return Ok(id);
        }
        if self.subsets.len() >= budget {
            return Err(AutomataError::BlowupLimitExceeded(budget));
        }
        let id = self.subsets.len() as u32;
        self.subset_index.insert(set.clone(), id);
        self.subsets.push(set);
        self.subset_succ.push(None);
        Ok(id)
    }

    fn start(&mut self, budget: usize) -> Result<u32, AutomataError> {
        let q = self.member.start.unwrap_or(self.member.nfa.initial());
        match self.member.mode {
            Mode::AsIs => Ok(q),
            _ => self.intern(vec![q], budget),
        }
    }

    fn is_final(&self, c: u32) -> bool {
        match self.member.mode {
            Mode::AsIs => self.end_mask[c as usize],
            Mode::Determinized => self.subsets[c as usize]
                .iter()
                .any(|&q| self.end_mask[q as usize]),
            Mode::DeterminizedComplemented => !self.subsets[c as usize]
                .iter()
                .any(|&q| self.end_mask[q as usize]),
        }
    }

    fn successors(&mut self, c: u32, budget: usize) -> Result<Vec<Vec<u32>>, AutomataError> {
        let nfa = self.member.nfa.clone();
        let k = nfa.alphabet().len();
        match self.member.mode {
            Mode::AsIs => Ok((0..k).map(|a| nfa.successors(c, a).to_vec()).collect()),
            _ => {
                if let Some(s) = &self.subset_succ[c as usize] {
                    return Ok(s.iter().map(|&t| vec![t]).collect());
                }
                let mut row = Vec::with_capacity(k);
                for a in 0..k {
                    let mut next: Vec<u32> = self.subsets[c as usize]
                        .iter()
                        .flat_map(|&q| nfa.successors(q, a).iter().copied())
                        .collect();
                    next.sort_unstable();
                    next.dedup();
                    row.push(self.intern(next, budget)?);
                }
                let out = row.iter().map(|&t| vec![t]).collect();
                self.subset_succ[c as usize] = Some(row);
                Ok(out)
            }
        }
    }
}

/// Product automaton whose states are tuples of member states. A tuple is
/// final iff every component is final under its member's mode. Tuples are
/// allocated only when discovered as a successor of an expanded tuple, so
/// the allocation count never exceeds the number of reachable tuples.
///
/// The product of zero members accepts every word.
pub struct LazyProduct {
    alphabet: Alphabet,
    members: Vec<MemberState>,
    tuples: Vec<Box<[u32]>>,
    index: HashMap<Box<[u32]>, u32>,
    succ: Vec<Option<Vec<Vec<u32>>>>,
    finals: Vec<bool>,
    budget: usize,
}

impl LazyProduct {
    pub fn new(alphabet: Alphabet, members: Vec<Member>) -> Self {
        Self::with_budget(alphabet, members, DEFAULT_STATE_BUDGET)
    }

    /// `budget` caps both the tuple count and each member's subset count.
    pub fn with_budget(alphabet: Alphabet, members: Vec<Member>, budget: usize) -> Self {
        for m in &members {
            assert_eq!(m.nfa.alphabet(), &alphabet, "members must share the alphabet");
        }
        let mut p = LazyProduct {
            alphabet,
            members: members.into_iter().map(MemberState::new).collect(),
            tuples: Vec::new(),
            index: HashMap::new(),
            succ: Vec::new(),
            finals: Vec::new(),
            budget: budget.max(1),
        };
        let start: Vec<u32> = (0..p.members.len())
            .map(|i| p.members[i].start(budget.max(1)))
            .collect::<Result<_, _>>()
            .expect("a singleton subset always fits the budget");
        p.intern(start.into_boxed_slice())
            .expect("the start tuple always fits the budget");
        p
    }

    fn intern(&mut self, t: Box<[u32]>) -> Result<u32, AutomataError> {
        if let Some(&id) = self.index.get(&t) {
            return Ok(id);
        }
        if self.tuples.len() >= self.budget {
            return Err(AutomataError::BlowupLimitExceeded(self.budget));
        }
        let fin = t
            .iter()
            .zip(&self.members)
            .all(|(&c, m)| m.is_final(c));
        let id = self.tuples.len() as u32;
        self.index.insert(t.clone(), id);
        self.tuples.push(t);
        self.succ.push(None);
        self.finals.push(fin);
        Ok(id)
    }

    pub fn alphabet(&self) -> &Alphabet {
        &self.alphabet
    }

    pub fn num_members(&self) -> usize {
        self.members.len()
    }

    pub fn start(&self) -> u32 {
        0
    }

    pub fn is_final(&self, s: u32) -> bool {
        self.finals[s as usize]
    }

    /// Number of tuple states allocated so far.
    pub fn expanded(&self) -> usize {
        self.tuples.len()
    }

    pub fn tuple(&self, s: u32) -> &[u32] {
        &self.tuples[s as usize]
    }

    /// Computes (once) the successors of `s` on every symbol.
    pub fn expand(&mut self, s: u32) -> Result<(), AutomataError> {
        if self.succ[s as usize].is_some() {
            return Ok(());
        }
        let k = self.alphabet.len();
        let tuple = self.tuples[s as usize].clone();
        let mut per_member = Vec::with_capacity(tuple.len());
        for (i, &c) in tuple.iter().enumerate() {
            per_member.push(self.members[i].successors(c, self.budget)?);
        }
        let mut row = Vec::with_capacity(k);
        for a in 0..k {
            let mut out = Vec::new();
            let choices: Vec<&Vec<u32>> = per_member.iter().map(|s| &s[a]).collect();
            if choices.iter().all(|c| !c.is_empty()) {
                let mut idx = vec![0usize; choices.len()];
                loop {
                    let t: Box<[u32]> = idx.iter().zip(&choices).map(|(&i, c)| c[i]).collect();
                    out.push(self.intern(t)?);
                    // odometer over the component choices
                    let mut j = choices.len();
                    loop {
                        if j == 0 {
                            break;
                        }
                        j -= 1;
                        idx[j] += 1;
                        if idx[j] < choices[j].len() {
                            break;
                        }
                        idx[j] = 0;
                    }
                    if idx.iter().all(|&i| i == 0) {
                        break;
                    }
                }
            }
            out.sort_unstable();
            out.dedup();
            row.push(out);
        }
        self.succ[s as usize] = Some(row);
        Ok(())
    }

    /// Successors of `s` on symbol index `a`, expanding `s` if needed.
    pub fn successors(&mut self, s: u32, a: usize) -> Result<&[u32], AutomataError> {
        self.expand(s)?;
        Ok(&self.succ[s as usize].as_ref().expect("expanded")[a])
    }

    /// Shortest accepted word (ties broken by alphabet order), as symbol
    /// indices. Expansion stops as soon as a final tuple is discovered.
    pub fn shortest_witness(&mut self) -> Result<Option<Vec<usize>>, AutomataError> {
        let start = self.start();
        let mut parent: HashMap<u32, (u32, usize)> = HashMap::new();
        let build = |parent: &HashMap<u32, (u32, usize)>, mut s: u32| {
            let mut w = Vec::new();
            while s != start {
                let (p, a) = parent[&s];
                w.push(a);
                s = p;
            }
            w.reverse();
            w
        };
        if self.is_final(start) {
            return Ok(Some(Vec::new()));
        }
        let mut queue = VecDeque::from([start]);
        let mut seen = std::collections::HashSet::from([start]);
        while let Some(s) = queue.pop_front() {
            for a in 0..self.alphabet.len() {
                let succ = self.successors(s, a)?.to_vec();
                for t in succ {
                    if seen.insert(t) {
                        parent.insert(t, (s, a));
                        if self.is_final(t) {
                            return Ok(Some(build(&parent, t)));
                        }
                        queue.push_back(t);
                    }
                }
            }
        }
        Ok(None)
    }

    /// Expands everything reachable and returns the reachable tuple ids in
    /// BFS order.
    pub fn explore(&mut self) -> Result<Vec<u32>, AutomataError> {
        let start = self.start();
        let mut order = vec![start];
        let mut seen = vec![false; self.tuples.len().max(1)];
        seen[start as usize] = true;
        let mut i = 0;
        while i < order.len() {
            let s = order[i];
            i += 1;
            for a in 0..self.alphabet.len() {
                let succ = self.successors(s, a)?.to_vec();
                for t in succ {
                    if seen.len() <= t as usize {
                        seen.resize(t as usize + 1, false);
                    }
                    if !seen[t as usize] {
                        seen[t as usize] = true;
                        order.push(t);
                    }
                }
            }
        }
        Ok(order)
    }

    /// Explicit automaton over the reachable tuples, trimmed.
    pub fn to_nfa(&mut self) -> Result<Nfa, AutomataError> {
        let order = self.explore()?;
        let mut map = HashMap::new();
        for (i, &s) in order.iter().enumerate() {
            map.insert(s, i as u32);
        }
        let mut m = Nfa::new(self.alphabet.clone(), order.len(), 0);
        for (i, &s) in order.iter().enumerate() {
            m.set_final(i as u32, self.is_final(s));
            for a in 0..self.alphabet.len() {
                for &t in self.successors(s, a)? {
                    m.add_transition(i as u32, a, map[&t]);
                }
            }
        }
        Ok(m.trim())
    }

    /// Membership by simulating the product on `w`.
    pub fn accepts_symbols(&mut self, w: &[usize]) -> Result<bool, AutomataError> {
        let mut cur = vec![self.start()];
        for &a in w {
            let mut next = Vec::new();
            for &s in &cur {
                next.extend_from_slice(self.successors(s, a)?);
            }
            next.sort_unstable();
            next.dedup();
            cur = next;
        }
        Ok(cur.iter().any(|&s| self.is_final(s)))
    }

    pub fn accepts(&mut self, w: &str) -> Result<bool, AutomataError> {
        let syms = self
            .alphabet
            .encode(w)
            .ok_or_else(|| {
                let c = w.chars().find(|&c| !self.alphabet.contains(c)).expect("foreign symbol");
                AutomataError::ForeignSymbol(c)
            })?;
        self.accepts_symbols(&syms)
    }
}

/// Emptiness check with a shortest witness word when non-empty.
pub fn is_empty(p: &mut LazyProduct) -> Result<(bool, Option<String>), AutomataError> {
    Ok(match p.shortest_witness()? {
        Some(w) => (false, Some(p.alphabet().decode(&w))),
        None => (true, None),
    })
}

/// Convenience constructor: the product of the given automata, all as-is.
pub fn lazy_product(members: Vec<Member>) -> LazyProduct {
    let alphabet = members
        .first()
        .map(|m| m.nfa.alphabet().clone())
        .expect("lazy_product needs at least one member");
    LazyProduct::new(alphabet, members)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::automata::compile_regex;
    use crate::frontend::Regex;

    fn nfa(r: Regex) -> Arc<Nfa> {
        Arc::new(compile_regex(&r, &Alphabet::new(['a', 'b'])).unwrap())
    }

    #[test]
    fn a_star_and_b_star_meet_at_epsilon() {
        let mut p = lazy_product(vec![
            Member::new(nfa(Regex::star(Regex::lit('a'))), Mode::AsIs),
            Member::new(nfa(Regex::star(Regex::lit('b'))), Mode::AsIs),
        ]);
        assert_eq!(is_empty(&mut p).unwrap(), (false, Some(String::new())));
        assert!(!p.accepts("a").unwrap());
    }

    #[test]
    fn disjoint_first_symbols_are_empty() {
        let plus = |c| Regex::concat(Regex::lit(c), Regex::star(Regex::lit(c)));
        let mut p = lazy_product(vec![
            Member::new(nfa(plus('a')), Mode::AsIs),
            Member::new(nfa(plus('b')), Mode::AsIs),
        ]);
        assert_eq!(is_empty(&mut p).unwrap(), (true, None));
    }

    #[test]
    fn complemented_member_excludes_its_language() {
        let mut p = lazy_product(vec![
            Member::new(nfa(Regex::star(Regex::word("ab"))), Mode::AsIs),
            Member::new(nfa(Regex::star(Regex::lit('a'))), Mode::DeterminizedComplemented),
        ]);
        assert_eq!(is_empty(&mut p).unwrap(), (false, Some("ab".into())));
        assert!(!p.accepts("").unwrap());
        assert!(p.accepts("abab").unwrap());
    }

    #[test]
    fn zero_members_accept_everything() {
        let mut p = LazyProduct::new(Alphabet::new(['a', 'b']), vec![]);
        assert!(p.accepts("abba").unwrap());
        assert_eq!(p.explore().unwrap().len(), 1);
    }

    #[test]
    fn overrides_select_a_path_segment() {
        // a·b·a: states 0 -a-> 1 -b-> 2 -a-> 3
        let m = nfa(Regex::word("aba"));
        let mut p = LazyProduct::new(Alphabet::new(['a', 'b']), vec![Member::between(m, 1, 2)]);
        assert!(p.accepts("b").unwrap());
        assert!(!p.accepts("ab").unwrap());
    }
}
