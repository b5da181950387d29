use super::{CensusTable, Dfa};
use std::fmt::Write;

/// Graphviz rendering; parallel edges are merged into one labeled edge and
/// accepting states are drawn with a double circle.
pub fn to_dot(a: &Dfa, letter_name: impl Fn(usize) -> String) -> String {
    let mut out = String::from("digraph dfa {\n  rankdir=LR;\n  init [shape=point];\n");
    for s in 0..a.state_count() {
        let shape = if a.is_accepting(s) { "doublecircle" } else { "circle" };
        writeln!(out, "  s{s} [shape={shape}, label=\"{s}\"];").unwrap();
    }
    writeln!(out, "  init -> s{};", a.start()).unwrap();
    for s in 0..a.state_count() {
        let mut by_target: Vec<(usize, Vec<usize>)> = Vec::new();
        for l in 0..a.alphabet() {
            let t = a.next(s, l);
            match by_target.iter_mut().find(|e| e.0 == t) {
                Some(e) => e.1.push(l),
                None => by_target.push((t, vec![l])),
            }
        }
        for (t, letters) in by_target {
            let label: Vec<String> = letters.into_iter().map(&letter_name).collect();
            writeln!(out, "  s{s} -> s{t} [label=\"{}\"];", label.join(",").replace('"', "\\\"")).unwrap();
        }
    }
    out.push_str("}\n");
    out
}

/// Columns n, count, cumulative.
pub fn census_csv(c: &CensusTable) -> String {
    let mut out = String::from("n,count,cumulative\n");
    for (n, (a, b)) in c.counts.iter().zip(&c.cumulative).enumerate() {
        writeln!(out, "{n},{a},{b}").unwrap();
    }
    out
}
