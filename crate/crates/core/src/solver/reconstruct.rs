//! Witness words of a prescribed length.

use std::collections::HashMap;

use crate::automata::{AutomataError, LazyProduct};

/// The lexicographically smallest word of length exactly `n` accepted by
/// `p`, or `None` if there is none.
///
/// Backward layers `can[k]` (states from which a final state is reachable in
/// exactly `k` steps) are eventually periodic in `k`, so only the layers up
/// to the first repetition are stored.
pub fn word_of_length(p: &mut LazyProduct, n: u64) -> Result<Option<String>, AutomataError> {
    let order = p.explore()?;
    let k = p.alphabet().len();
    let mut idx: HashMap<u32, usize> = HashMap::new();
    for (i, &s) in order.iter().enumerate() {
        idx.insert(s, i);
    }
    let m = order.len();
    let mut succ: Vec<Vec<Vec<usize>>> = Vec::with_capacity(m);
    for &s in &order {
        let mut row = Vec::with_capacity(k);
        for a in 0..k {
            row.push(p.successors(s, a)?.iter().map(|t| idx[t]).collect());
        }
        succ.push(row);
    }
    let finals: Vec<bool> = order.iter().map(|&s| p.is_final(s)).collect();

    let mut layers: Vec<Vec<bool>> = Vec::new();
    let mut seen: HashMap<Vec<bool>, usize> = HashMap::new();
    let mut cur = finals;
    let mut cycle = None;
    loop {
        if let Some(&first) = seen.get(&cur) {
            cycle = Some((first, layers.len() - first));
            break;
        }
        if layers.len() as u64 > n {
            break;
        }
        let next: Vec<bool> = (0..m)
            .map(|q| succ[q].iter().any(|ts| ts.iter().any(|&t| cur[t])))
            .collect();
        seen.insert(cur.clone(), layers.len());
        layers.push(std::mem::replace(&mut cur, next));
    }
    let layer = |r: u64| -> &Vec<bool> {
        match cycle {
            Some((first, period)) if r as usize >= layers.len() => {
                &layers[first + ((r - first as u64) % period as u64) as usize]
            }
            _ => &layers[r as usize],
        }
    };

    let start = idx[&p.start()];
    if !layer(n)[start] {
        return Ok(None);
    }
    let mut states = vec![start];
    let mut word = Vec::with_capacity(n as usize);
    for pos in 0..n {
        let ok = layer(n - pos - 1);
        let mut found = false;
        for a in 0..k {
            let mut next: Vec<usize> = states
                .iter()
                .flat_map(|&q| succ[q][a].iter().copied())
                .filter(|&t| ok[t])
                .collect();
            if !next.is_empty() {
                next.sort_unstable();
                next.dedup();
                states = next;
                word.push(a);
                found = true;
                break;
            }
        }
        assert!(found, "backward layers promise a continuation");
    }
    Ok(Some(p.alphabet().decode(&word)))
}

#[cfg(test)]
mod tests {
    use std::sync::Arc;

    use super::*;
    use crate::automata::{compile_regex, Member, Mode};
    use crate::frontend::{parse_regex, Alphabet};

    fn product(r: &str) -> LazyProduct {
        let ab = Alphabet::new(['a', 'b']);
        let m = compile_regex(&parse_regex(r).unwrap(), &ab).unwrap();
        LazyProduct::new(ab, vec![Member::new(Arc::new(m), Mode::AsIs)])
    }

    #[test]
    fn exact_lengths() {
        assert_eq!(word_of_length(&mut product("a*"), 3).unwrap().as_deref(), Some("aaa"));
        assert_eq!(word_of_length(&mut product("(ab)*"), 4).unwrap().as_deref(), Some("abab"));
        assert_eq!(word_of_length(&mut product("(ab)*"), 3).unwrap(), None);
        assert_eq!(word_of_length(&mut product("b*a(a|b)*"), 2).unwrap().as_deref(), Some("aa"));
        assert_eq!(word_of_length(&mut product("(aaa)*"), 3000).unwrap().map(|w| w.len()), Some(3000));
    }
}
