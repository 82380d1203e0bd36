//! Canonical keys of `(B, Π)` under block-preserving relabelings.

use serde::Serialize;

use super::QuantumSeed;

/// Which relabelings the key is invariant under.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum CanonicalScope {
    /// Permutations of unfrozen vertices of equal weight; frozen vertices stay put.
    #[default]
    Unfrozen,
    /// All permutations preserving weight and frozen status.
    Full,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct CanonicalKey(Vec<i64>);

impl CanonicalKey {
    pub fn as_slice(&self) -> &[i64] {
        &self.0
    }

    /// Short stable hexadecimal digest, used as a node label.
    pub fn digest(&self) -> String {
        let mut h: u64 = 0xcbf2_9ce4_8422_2325;
        for v in &self.0 {
            for b in v.to_le_bytes() {
                h ^= u64::from(b);
                h = h.wrapping_mul(0x0100_0000_01b3);
            }
        }
        format!("{h:016x}")
    }
}

struct Search<'a> {
    seed: &'a QuantumSeed,
    cells: Vec<usize>,
    candidates: Vec<Vec<usize>>,
    placed: Vec<usize>,
    used: Vec<bool>,
    current: Vec<i64>,
    best: Option<Vec<i64>>,
    best_perm: Vec<usize>,
}

impl Search<'_> {
    fn push_position(&mut self, p: usize) {
        let v = self.placed[p];
        for q in 0..=p {
            let w = self.placed[q];
            self.current.push(self.seed.b2().get(v, w));
            self.current.push(self.seed.b2().get(w, v));
            self.current.push(self.seed.pi().entry(v, w));
        }
    }

    /// Compares the current prefix with the same-length prefix of the best key.
    fn prefix_cmp(&self) -> std::cmp::Ordering {
        match &self.best {
            None => std::cmp::Ordering::Less,
            Some(b) => self.current.as_slice().cmp(&b[..self.current.len()]),
        }
    }

    fn run(&mut self, p: usize) {
        if p == self.cells.len() {
            if self.prefix_cmp() == std::cmp::Ordering::Less {
                self.best = Some(self.current.clone());
                self.best_perm = self.placed.clone();
            }
            return;
        }
        let cands = self.candidates[self.cells[p]].clone();
        for v in cands {
            if self.used[v] {
                continue;
            }
            self.used[v] = true;
            self.placed.push(v);
            let mark = self.current.len();
            self.push_position(p);
            if self.prefix_cmp() != std::cmp::Ordering::Greater {
                self.run(p + 1);
            }
            self.current.truncate(mark);
            self.placed.pop();
            self.used[v] = false;
        }
    }
}

impl QuantumSeed {
    pub fn canonical_form(&self, scope: CanonicalScope) -> CanonicalKey {
        self.canonical_labeling(scope).0
    }

    /// The key together with a relabeling `sigma` (vertex `i` goes to `sigma[i]`)
    /// whose image realizes it.
    pub fn canonical_labeling(&self, scope: CanonicalScope) -> (CanonicalKey, Vec<usize>) {
        let n = self.n();
        // Blocks ordered by (frozen, weight); unfrozen vertices first.
        let mut order: Vec<usize> = (0..n).collect();
        order.sort_by_key(|&i| (!self.is_unfrozen(i), self.weight(i), i));
        let mut candidates: Vec<Vec<usize>> = Vec::new();
        let mut cell_open: Vec<bool> = Vec::new();
        let mut cells = Vec::with_capacity(n);
        let mut header = vec![n as i64];
        for &i in &order {
            let free = self.is_unfrozen(i) || scope == CanonicalScope::Full;
            let block = (self.is_unfrozen(i), self.weight(i));
            let joins = free
                && cell_open.last() == Some(&true)
                && candidates
                    .last()
                    .is_some_and(|c| (self.is_unfrozen(c[0]), self.weight(c[0])) == block);
            if joins {
                candidates.last_mut().expect("nonempty").push(i);
            } else {
                candidates.push(vec![i]);
                cell_open.push(free);
            }
            cells.push(candidates.len() - 1);
            header.push(i64::from(self.is_unfrozen(i)));
            header.push(self.weight(i).d());
        }
        let mut search = Search {
            seed: self,
            cells,
            candidates,
            placed: Vec::with_capacity(n),
            used: vec![false; n],
            current: Vec::new(),
            best: None,
            best_perm: Vec::new(),
        };
        search.run(0);
        let body = search.best.unwrap_or_default();
        header.extend(body);
        let mut sigma = vec![0; n];
        for (pos, &v) in search.best_perm.iter().enumerate() {
            sigma[v] = order[pos];
        }
        (CanonicalKey(header), sigma)
    }
}
