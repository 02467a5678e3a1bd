use std::collections::{HashMap, VecDeque};

use super::{AutomataError, Nfa};

/// Subset construction. The result is deterministic and complete: the empty
/// subset is kept as a sink. With `complement`, a subset is final iff it
/// contains no final state of `m`.
pub fn subset_construction(m: &Nfa, budget: usize, complement: bool) -> Result<Nfa, AutomataError> {
    let k = m.alphabet().len();
    let mut index: HashMap<Vec<u32>, u32> = HashMap::new();
    let mut subsets: Vec<Vec<u32>> = Vec::new();
    let mut edges: Vec<Vec<u32>> = Vec::new();
    let start = vec![m.initial()];
    index.insert(start.clone(), 0);
    subsets.push(start);
    let mut queue = VecDeque::from([0u32]);
    while let Some(s) = queue.pop_front() {
        let mut row = Vec::with_capacity(k);
        for a in 0..k {
            let mut next: Vec<u32> = subsets[s as usize]
                .iter()
                .flat_map(|&q| m.successors(q, a).iter().copied())
                .collect();
            next.sort_unstable();
            next.dedup();
            let id = match index.get(&next) {
                Some(&id) => id,
                None => {
                    if subsets.len() >= budget {
                        return Err(AutomataError::BlowupLimitExceeded(budget));
                    }
                    let id = subsets.len() as u32;
                    index.insert(next.clone(), id);
                    subsets.push(next);
                    queue.push_back(id);
                    id
                }
            };
            row.push(id);
        }
        edges.push(row);
    }
    let mut d = Nfa::new(m.alphabet().clone(), subsets.len(), 0);
    for (s, set) in subsets.iter().enumerate() {
        let has_final = set.iter().any(|&q| m.is_final(q));
        d.set_final(s as u32, has_final != complement);
        for (a, &t) in edges[s].iter().enumerate() {
            d.add_transition(s as u32, a, t);
        }
    }
    Ok(d)
}

/// Complete DFA for `A* \ L(m)`.
pub fn determinize_complement(m: &Nfa, budget: usize) -> Result<Nfa, AutomataError> {
    subset_construction(m, budget, true)
}

pub fn determinize(m: &Nfa, budget: usize) -> Result<Nfa, AutomataError> {
    subset_construction(m, budget, false)
}
