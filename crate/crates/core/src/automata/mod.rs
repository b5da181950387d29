//! Deterministic automata over index alphabets.
//!
//! Transition tables are total; a machine may contain one or more absorbing
//! non-accepting sinks. Pair alphabets over Σ×Σ use the letter index
//! `s * n + s'` for the pair (s, s').

mod export;
mod sparse;

pub use export::{census_csv, to_dot};
pub use sparse::{simple_sparse_decomposition, SimpleSparseComponent};

use crate::error::{Error, Result};
use num_bigint::BigUint;
use num_traits::Zero;
use std::collections::{HashMap, VecDeque};

/// Default cap for subset construction.
pub const DEFAULT_SUBSET_CAP: usize = 1 << 20;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Dfa {
    alphabet: usize,
    start: usize,
    accepting: Vec<bool>,
    delta: Vec<u32>,
}

/// How fast the number of accepted words grows with length.
#[derive(Clone, Copy, Debug, PartialEq, Eq, serde::Serialize)]
pub enum GrowthDegree {
    /// O(n^d) words of length n; finite languages report 0.
    Polynomial(u32),
    Infinite,
}

/// Per-length counts c_n for n = 0..=N and their running sums.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CensusTable {
    pub counts: Vec<BigUint>,
    pub cumulative: Vec<BigUint>,
}

impl Dfa {
    /// `delta[s * alphabet + a]` is the successor of s on letter a.
    pub fn new(alphabet: usize, start: usize, accepting: Vec<bool>, delta: Vec<u32>) -> Result<Self> {
        let n = accepting.len();
        if alphabet == 0 || n == 0 || start >= n || delta.len() != n * alphabet {
            return Err(Error::validation("malformed transition table"));
        }
        if delta.iter().any(|&t| t as usize >= n) {
            return Err(Error::validation("transition to an unknown state"));
        }
        Ok(Dfa { alphabet, start, accepting, delta })
    }

    pub fn from_fn(states: usize, alphabet: usize, start: usize, f: impl Fn(usize, usize) -> usize, acc: impl Fn(usize) -> bool) -> Self {
        let mut delta = Vec::with_capacity(states * alphabet);
        for s in 0..states {
            for a in 0..alphabet {
                delta.push(f(s, a) as u32);
            }
        }
        Dfa { alphabet, start, accepting: (0..states).map(acc).collect(), delta }
    }

    /// Σ*.
    pub fn universal(alphabet: usize) -> Self {
        Self::from_fn(1, alphabet, 0, |_, _| 0, |_| true)
    }

    /// The empty language.
    pub fn empty(alphabet: usize) -> Self {
        Self::from_fn(1, alphabet, 0, |_, _| 0, |_| false)
    }

    pub fn alphabet(&self) -> usize {
        self.alphabet
    }
    pub fn state_count(&self) -> usize {
        self.accepting.len()
    }
    pub fn start(&self) -> usize {
        self.start
    }
    pub fn is_accepting(&self, s: usize) -> bool {
        self.accepting[s]
    }
    pub fn accepting(&self) -> &[bool] {
        &self.accepting
    }
    /// Row-major table, `delta[s * alphabet + a]`.
    pub fn transitions(&self) -> &[u32] {
        &self.delta
    }
    pub fn next(&self, s: usize, a: usize) -> usize {
        self.delta[s * self.alphabet + a] as usize
    }

    pub fn run(&self, word: &[usize]) -> usize {
        word.iter().fold(self.start, |s, &a| self.next(s, a))
    }

    pub fn accepts(&self, word: &[usize]) -> bool {
        self.accepting[self.run(word)]
    }

    pub fn reachable(&self) -> Vec<bool> {
        let mut seen = vec![false; self.state_count()];
        let mut queue = VecDeque::from([self.start]);
        seen[self.start] = true;
        while let Some(s) = queue.pop_front() {
            for a in 0..self.alphabet {
                let t = self.next(s, a);
                if !seen[t] {
                    seen[t] = true;
                    queue.push_back(t);
                }
            }
        }
        seen
    }

    pub fn coreachable(&self) -> Vec<bool> {
        let n = self.state_count();
        let mut rev: Vec<Vec<usize>> = vec![Vec::new(); n];
        for s in 0..n {
            for a in 0..self.alphabet {
                rev[self.next(s, a)].push(s);
            }
        }
        let mut seen = self.accepting.clone();
        let mut stack: Vec<usize> = (0..n).filter(|&s| seen[s]).collect();
        while let Some(t) = stack.pop() {
            for &s in &rev[t] {
                if !seen[s] {
                    seen[s] = true;
                    stack.push(s);
                }
            }
        }
        seen
    }

    /// States both reachable and co-reachable.
    pub fn useful(&self) -> Vec<bool> {
        let r = self.reachable();
        let c = self.coreachable();
        r.iter().zip(&c).map(|(a, b)| *a && *b).collect()
    }

    /// Keeps useful states, numbered breadth-first from the start under the
    /// letter order, followed by a single dead sink.
    pub fn trim(&self) -> Dfa {
        let useful = self.useful();
        if !useful[self.start] {
            return Dfa::empty(self.alphabet);
        }
        let mut id: HashMap<usize, usize> = HashMap::from([(self.start, 0)]);
        let mut order = vec![self.start];
        let mut i = 0;
        while i < order.len() {
            let s = order[i];
            i += 1;
            for a in 0..self.alphabet {
                let t = self.next(s, a);
                if useful[t] && !id.contains_key(&t) {
                    id.insert(t, order.len());
                    order.push(t);
                }
            }
        }
        let dead = order.len();
        let needs_dead = order.iter().any(|&s| (0..self.alphabet).any(|a| !useful[self.next(s, a)]));
        let total = if needs_dead { dead + 1 } else { dead };
        Dfa::from_fn(
            total,
            self.alphabet,
            0,
            |s, a| if s == dead { dead } else { id.get(&self.next(order[s], a)).copied().unwrap_or(dead) },
            |s| s < dead && self.accepting[order[s]],
        )
    }

    pub fn complement(&self) -> Dfa {
        Dfa { accepting: self.accepting.iter().map(|a| !a).collect(), ..self.clone() }
    }

    /// Synchronous product on a shared alphabet with an acceptance combiner.
    fn combine(&self, other: &Dfa, accept: impl Fn(bool, bool) -> bool) -> Result<Dfa> {
        if self.alphabet != other.alphabet {
            return Err(Error::validation("alphabets differ"));
        }
        let k = self.alphabet;
        let mut id: HashMap<(usize, usize), u32> = HashMap::new();
        let mut order = vec![(self.start, other.start)];
        id.insert(order[0], 0);
        let mut delta = Vec::new();
        let mut i = 0;
        while i < order.len() {
            let (s, t) = order[i];
            i += 1;
            for a in 0..k {
                let key = (self.next(s, a), other.next(t, a));
                let next = *id.entry(key).or_insert_with(|| {
                    order.push(key);
                    (order.len() - 1) as u32
                });
                delta.push(next);
            }
        }
        let accepting = order.iter().map(|&(s, t)| accept(self.accepting[s], other.accepting[t])).collect();
        Dfa::new(k, 0, accepting, delta)
    }

    pub fn intersect(&self, other: &Dfa) -> Result<Dfa> {
        self.combine(other, |a, b| a && b)
    }

    pub fn union(&self, other: &Dfa) -> Result<Dfa> {
        self.combine(other, |a, b| a || b)
    }

    /// Reads pairs (a, b) with index a * |B| + b; accepts when both accept.
    pub fn product(&self, other: &Dfa) -> Dfa {
        let kb = other.alphabet;
        let nb = other.state_count();
        Dfa::from_fn(
            self.state_count() * nb,
            self.alphabet * kb,
            self.start * nb + other.start,
            |s, l| self.next(s / nb, l / kb) * nb + other.next(s % nb, l % kb),
            |s| self.accepting[s / nb] && other.accepting[s % nb],
        )
    }

    /// Image under the projection of Σ×Σ onto coordinate 0 or 1, determinized.
    pub fn project(&self, base: usize, coord: usize, cap: usize) -> Result<Dfa> {
        if base * base != self.alphabet || coord > 1 {
            return Err(Error::validation("projection needs a pair alphabet"));
        }
        let component = |l: usize| if coord == 0 { l / base } else { l % base };
        let mut id: HashMap<Vec<u32>, u32> = HashMap::new();
        let start = vec![self.start as u32];
        id.insert(start.clone(), 0);
        let mut order = vec![start];
        let mut delta = Vec::new();
        let mut i = 0;
        while i < order.len() {
            let set = order[i].clone();
            i += 1;
            let mut succ: Vec<Vec<u32>> = vec![Vec::new(); base];
            for &s in &set {
                for l in 0..self.alphabet {
                    succ[component(l)].push(self.delta[s as usize * self.alphabet + l]);
                }
            }
            for mut next in succ {
                next.sort_unstable();
                next.dedup();
                let n = match id.get(&next) {
                    Some(&n) => n,
                    None => {
                        if order.len() >= cap {
                            return Err(Error::StateBlowup { cap });
                        }
                        let n = order.len() as u32;
                        id.insert(next.clone(), n);
                        order.push(next);
                        n
                    }
                };
                delta.push(n);
            }
        }
        let accepting = order.iter().map(|set| set.iter().any(|&s| self.accepting[s as usize])).collect();
        Dfa::new(base, 0, accepting, delta)
    }

    /// Minimal equivalent machine by partition refinement over reachable
    /// states, renumbered breadth-first from the start.
    pub fn minimize(&self) -> Dfa {
        let reach = self.reachable();
        let states: Vec<usize> = (0..self.state_count()).filter(|&s| reach[s]).collect();
        let mut class: Vec<u32> = vec![0; self.state_count()];
        for &s in &states {
            class[s] = self.accepting[s] as u32;
        }
        let mut count = {
            let mut c: Vec<u32> = states.iter().map(|&s| class[s]).collect();
            c.sort_unstable();
            c.dedup();
            c.len()
        };
        loop {
            let mut sig_id: HashMap<Vec<u32>, u32> = HashMap::new();
            let mut next = vec![0u32; self.state_count()];
            for &s in &states {
                let mut sig = Vec::with_capacity(self.alphabet + 1);
                sig.push(class[s]);
                sig.extend((0..self.alphabet).map(|a| class[self.next(s, a)]));
                let n = sig_id.len() as u32;
                next[s] = *sig_id.entry(sig).or_insert(n);
            }
            let new_count = sig_id.len();
            class = next;
            if new_count == count {
                break;
            }
            count = new_count;
        }
        let rep: HashMap<u32, usize> = states.iter().rev().map(|&s| (class[s], s)).collect();
        let quotient = Dfa::from_fn(
            count,
            self.alphabet,
            class[self.start] as usize,
            |c, a| class[self.next(rep[&(c as u32)], a)] as usize,
            |c| self.accepting[rep[&(c as u32)]],
        );
        quotient.renumber()
    }

    /// Breadth-first renumbering from the start; drops unreachable states.
    pub fn renumber(&self) -> Dfa {
        let mut id: HashMap<usize, usize> = HashMap::from([(self.start, 0)]);
        let mut order = vec![self.start];
        let mut i = 0;
        while i < order.len() {
            let s = order[i];
            i += 1;
            for a in 0..self.alphabet {
                let t = self.next(s, a);
                if let std::collections::hash_map::Entry::Vacant(e) = id.entry(t) {
                    e.insert(order.len());
                    order.push(t);
                }
            }
        }
        Dfa::from_fn(order.len(), self.alphabet, 0, |s, a| id[&self.next(order[s], a)], |s| self.accepting[order[s]])
    }

    pub fn is_empty(&self) -> bool {
        let reach = self.reachable();
        !(0..self.state_count()).any(|s| reach[s] && self.accepting[s])
    }

    /// Successor lists restricted to useful states, with letters.
    fn useful_edges(&self) -> (Vec<bool>, Vec<Vec<(usize, usize)>>) {
        let useful = self.useful();
        let edges = (0..self.state_count())
            .map(|s| {
                if !useful[s] {
                    return Vec::new();
                }
                (0..self.alphabet).map(|a| (a, self.next(s, a))).filter(|&(_, t)| useful[t]).collect()
            })
            .collect();
        (useful, edges)
    }

    /// Strongly connected components of the useful subgraph in reverse
    /// topological order (sinks first), with a flag for containing a cycle.
    pub(crate) fn useful_sccs(&self) -> (Vec<Vec<usize>>, Vec<bool>, Vec<Vec<(usize, usize)>>) {
        let (useful, edges) = self.useful_edges();
        let comps = tarjan(&useful, &edges);
        let cyclic = comps
            .iter()
            .map(|c| c.len() > 1 || edges[c[0]].iter().any(|&(_, t)| t == c[0]))
            .collect();
        (comps, cyclic, edges)
    }

    /// Some useful state lies on a cycle.
    pub fn is_infinite(&self) -> bool {
        let (_, cyclic, _) = self.useful_sccs();
        cyclic.iter().any(|&c| c)
    }

    /// Every cyclic component of the useful subgraph is one simple cycle:
    /// each of its states has exactly one letter staying inside.
    pub fn is_sparse(&self) -> bool {
        let (comps, cyclic, edges) = self.useful_sccs();
        let mut comp_of = vec![usize::MAX; self.state_count()];
        for (i, c) in comps.iter().enumerate() {
            for &s in c {
                comp_of[s] = i;
            }
        }
        comps.iter().zip(&cyclic).all(|(c, &cyc)| {
            !cyc || c.iter().all(|&s| edges[s].iter().filter(|&&(_, t)| comp_of[t] == comp_of[s]).count() == 1)
        })
    }

    /// Max number of cycles on one accepting path, minus one (at least 0).
    pub fn growth_degree(&self) -> GrowthDegree {
        if !self.is_sparse() {
            return GrowthDegree::Infinite;
        }
        let (comps, cyclic, edges) = self.useful_sccs();
        let mut comp_of = vec![usize::MAX; self.state_count()];
        for (i, c) in comps.iter().enumerate() {
            for &s in c {
                comp_of[s] = i;
            }
        }
        // Components come sinks first, so successors are already scored.
        let mut best = vec![0u32; comps.len()];
        for (i, c) in comps.iter().enumerate() {
            let mut down = 0;
            for &s in c {
                for &(_, t) in &edges[s] {
                    if comp_of[t] != i {
                        down = down.max(best[comp_of[t]]);
                    }
                }
            }
            best[i] = down + cyclic[i] as u32;
        }
        let total = if comp_of[self.start] == usize::MAX { 0 } else { best[comp_of[self.start]] };
        GrowthDegree::Polynomial(total.saturating_sub(1))
    }

    /// Exact counts of accepted words of each length up to `max_len`.
    pub fn census(&self, max_len: usize) -> CensusTable {
        let trimmed = self.trim();
        let n = trimmed.state_count();
        let mut v: Vec<BigUint> = vec![BigUint::zero(); n];
        v[trimmed.start] = BigUint::from(1u32);
        let mut counts = Vec::with_capacity(max_len + 1);
        for len in 0..=max_len {
            let c: BigUint = (0..n).filter(|&s| trimmed.accepting[s]).map(|s| &v[s]).sum();
            counts.push(c);
            if len == max_len {
                break;
            }
            let mut next = vec![BigUint::zero(); n];
            for s in 0..n {
                if v[s].is_zero() {
                    continue;
                }
                for a in 0..trimmed.alphabet {
                    next[trimmed.next(s, a)] += &v[s];
                }
            }
            v = next;
        }
        let mut cumulative = Vec::with_capacity(counts.len());
        let mut acc = BigUint::zero();
        for c in &counts {
            acc += c;
            cumulative.push(acc.clone());
        }
        CensusTable { counts, cumulative }
    }
}

/// Iterative Tarjan over the states flagged in `active`.
fn tarjan(active: &[bool], edges: &[Vec<(usize, usize)>]) -> Vec<Vec<usize>> {
    let n = active.len();
    let mut index = vec![usize::MAX; n];
    let mut low = vec![0usize; n];
    let mut on_stack = vec![false; n];
    let mut stack = Vec::new();
    let mut comps = Vec::new();
    let mut counter = 0;
    for root in 0..n {
        if !active[root] || index[root] != usize::MAX {
            continue;
        }
        let mut call: Vec<(usize, usize)> = vec![(root, 0)];
        index[root] = counter;
        low[root] = counter;
        counter += 1;
        stack.push(root);
        on_stack[root] = true;
        while let Some(&mut (v, ref mut next_edge)) = call.last_mut() {
            if *next_edge < edges[v].len() {
                let w = edges[v][*next_edge].1;
                *next_edge += 1;
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
                if let Some(&(parent, _)) = call.last() {
                    low[parent] = low[parent].min(low[v]);
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
                    comp.sort_unstable();
                    comps.push(comp);
                }
            }
        }
    }
    comps
}

/// Pairs (v, w) of equal length with v ≺ w, where ≺ compares right to left:
/// the last position at which the words differ decides, by `ranks`.
pub fn lexlt_pair_automaton(alphabet_size: usize, ranks: &[usize]) -> Dfa {
    const EQ: usize = 0;
    const LT: usize = 1;
    const GT: usize = 2;
    let n = alphabet_size;
    Dfa::from_fn(
        3,
        n * n,
        EQ,
        |s, l| {
            let (a, b) = (l / n, l % n);
            match ranks[a].cmp(&ranks[b]) {
                std::cmp::Ordering::Equal => s,
                std::cmp::Ordering::Less => LT,
                std::cmp::Ordering::Greater => GT,
            }
        },
        |s| s == LT,
    )
}

/// Words over Σ whose last letter is not `zero`; the empty word included.
pub fn no_trailing_letter(alphabet: usize, zero: usize) -> Dfa {
    Dfa::from_fn(2, alphabet, 0, |_, a| (a == zero) as usize, |s| s == 0)
}
