use super::Dfa;
use crate::error::{Error, Result};

/// The language u_1 w_1* u_2 ... u_m w_m* u_{m+1}.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SimpleSparseComponent {
    /// m + 1 connecting words.
    pub us: Vec<Vec<usize>>,
    /// m nonempty loop words.
    pub ws: Vec<Vec<usize>>,
}

impl SimpleSparseComponent {
    pub fn loops(&self) -> usize {
        self.ws.len()
    }

    /// u_1 w_1^{n_1} ... u_m w_m^{n_m} u_{m+1}.
    pub fn instantiate(&self, ns: &[usize]) -> Vec<usize> {
        let mut out = self.us[0].clone();
        for (i, w) in self.ws.iter().enumerate() {
            for _ in 0..ns[i] {
                out.extend_from_slice(w);
            }
            out.extend_from_slice(&self.us[i + 1]);
        }
        out
    }

    pub fn matches(&self, word: &[usize]) -> bool {
        self.match_from(0, word)
    }

    fn match_from(&self, i: usize, rest: &[usize]) -> bool {
        let Some(rest) = rest.strip_prefix(self.us[i].as_slice()) else {
            return false;
        };
        if i == self.ws.len() {
            return rest.is_empty();
        }
        let w = &self.ws[i];
        let mut cur = rest;
        loop {
            if self.match_from(i + 1, cur) {
                return true;
            }
            match cur.strip_prefix(w.as_slice()) {
                Some(next) => cur = next,
                None => return false,
            }
        }
    }
}

/// Finite union of simple sparse languages equal to L(A).
///
/// On the trimmed machine every cyclic component is a single cycle. Each
/// accepting path is described by the sequence of components it visits, the
/// entry and exit state in each cycle, and the letters between components;
/// every such pattern yields one component (entry loop word, then the arc to
/// the exit state folded into the next connecting word). Components may
/// overlap. `cap` bounds how many are produced.
pub fn simple_sparse_decomposition(a: &Dfa, cap: usize) -> Result<Vec<SimpleSparseComponent>> {
    if !a.is_sparse() {
        return Err(Error::NotSparse);
    }
    let (comps, cyclic, edges) = a.useful_sccs();
    let mut comp_of = vec![usize::MAX; a.state_count()];
    for (i, c) in comps.iter().enumerate() {
        for &s in c {
            comp_of[s] = i;
        }
    }
    if comp_of[a.start()] == usize::MAX {
        return Ok(Vec::new());
    }
    let ctx = Walk { a, comp_of: &comp_of, cyclic: &cyclic, edges: &edges, cap };
    let mut out = Vec::new();
    ctx.explore(a.start(), Vec::new(), &mut Vec::new(), &mut Vec::new(), &mut out)?;
    out.sort();
    out.dedup();
    Ok(out)
}

struct Walk<'a> {
    a: &'a Dfa,
    comp_of: &'a [usize],
    cyclic: &'a [bool],
    edges: &'a [Vec<(usize, usize)>],
    cap: usize,
}

impl Walk<'_> {
    /// The unique internal successor of s in its cycle.
    fn cycle_step(&self, s: usize) -> (usize, usize) {
        let c = self.comp_of[s];
        *self.edges[s].iter().find(|&&(_, t)| self.comp_of[t] == c).expect("cycle edge")
    }

    fn explore(
        &self,
        s: usize,
        u: Vec<usize>,
        us: &mut Vec<Vec<usize>>,
        ws: &mut Vec<Vec<usize>>,
        out: &mut Vec<SimpleSparseComponent>,
    ) -> Result<()> {
        let c = self.comp_of[s];
        if !self.cyclic[c] {
            return self.leave(s, u, us, ws, out);
        }
        // Loop word read from the entry state.
        let mut word = Vec::new();
        let mut arcs = vec![(s, Vec::new())];
        let mut cur = s;
        loop {
            let (letter, next) = self.cycle_step(cur);
            word.push(letter);
            if next == s {
                break;
            }
            arcs.push((next, word.clone()));
            cur = next;
        }
        us.push(u);
        ws.push(word);
        for (x, arc) in arcs {
            self.leave(x, arc, us, ws, out)?;
        }
        us.pop();
        ws.pop();
        Ok(())
    }

    /// Stop at x if accepting, or step to a later component.
    fn leave(
        &self,
        x: usize,
        u: Vec<usize>,
        us: &mut Vec<Vec<usize>>,
        ws: &mut Vec<Vec<usize>>,
        out: &mut Vec<SimpleSparseComponent>,
    ) -> Result<()> {
        let c = self.comp_of[x];
        if self.a.is_accepting(x) {
            if out.len() >= self.cap {
                return Err(Error::CapExceeded {
                    what: "sparse components".into(),
                    observed: out.len().to_string(),
                    cap: self.cap.to_string(),
                });
            }
            let mut all_us = us.clone();
            all_us.push(u.clone());
            out.push(SimpleSparseComponent { us: all_us, ws: ws.clone() });
        }
        for &(letter, y) in &self.edges[x] {
            if self.comp_of[y] == c {
                continue;
            }
            let mut next_u = u.clone();
            next_u.push(letter);
            self.explore(y, next_u, us, ws, out)?;
        }
        Ok(())
    }
}
