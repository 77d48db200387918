//! The backward step as a Moore machine.
//!
//! The machine reads the configuration one cell at a time, walking against the
//! toggle side (descending from cell `2r-1` for left toggle, ascending from
//! cell 0 for right toggle), and emits one pre-image cell per cell read.
//!
//! States come in two families:
//!
//! * `s0 .. s(2^(2r+1)-2)`: a binary tree of border states. `s0` is initial
//!   and emits nothing; reading bit `b` in `s_k` moves to `s_(2k+1+b)`, which
//!   emits the border rule's inverse of `b`. After `2r` reads the tree ends.
//! * `q0 .. q(2^(2r+1)-1)`: main states. The label packs the bit just read as
//!   its most significant bit, followed by the `2r` most recently emitted
//!   cells, newest first. A main state emits the cell solved from that
//!   context; reading `b` moves to `q(b, solved, newest, ...)`.
//!
//! Emitted cells come out in reading order: cells `r-1, r-2, ..., 0, N-1, ...`
//! for left toggle and `r, r+1, ..., N-1, 0, ...` for right toggle.

use std::fmt::Write as _;

use crate::error::{HcaError, Result};
use crate::lattice::{Lattice, ToggleDirection};
use crate::rule::Rule;

/// Radius limit for transducer construction (32 main states).
pub const MAX_TRANSDUCER_RADIUS: usize = 2;
/// Node limit for exhaustive Hamiltonian search.
pub const MAX_HAMILTONIAN_NODES: usize = 16;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum StateKind {
    /// Tree node `s_k`.
    Border(usize),
    /// Main state `q_label`.
    Main(usize),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct State {
    pub kind: StateKind,
    /// `None` is the empty output.
    pub output: Option<u8>,
    /// Successor on input 0 and on input 1.
    pub next: [usize; 2],
}

impl State {
    pub fn name(&self) -> String {
        match self.kind {
            StateKind::Border(k) => format!("s{k}"),
            StateKind::Main(label) => format!("q{label}"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Transducer {
    radius: usize,
    direction: ToggleDirection,
    states: Vec<State>,
    border_count: usize,
}

/// Builds the machine for a toggle main rule and an absolute border rule
/// acting on the same side.
pub fn build_backward_transducer(main: &Rule, border: &Rule) -> Result<Transducer> {
    let radius = main.radius();
    if radius > MAX_TRANSDUCER_RADIUS {
        return Err(HcaError::LimitExceeded {
            what: "transducer radius",
            value: radius,
            limit: MAX_TRANSDUCER_RADIUS,
        });
    }
    if border.radius() != radius {
        return Err(HcaError::InvalidRule("main and border radii differ".into()));
    }
    let direction = [ToggleDirection::Left, ToggleDirection::Right]
        .into_iter()
        .find(|&d| main.is_toggle(d) && border.is_absolute(d))
        .ok_or_else(|| {
            HcaError::InvalidRule(format!(
                "{main} and {border} are not a toggle/absolute pair on one side"
            ))
        })?;

    let span = 2 * radius;
    let history_mask = (1usize << span) - 1;
    let border_count = (1usize << (span + 1)) - 1;
    let main_count = 1usize << (span + 1);
    let flip = border.output(0);

    // Cell solved from the bit read and the emitted history (newest first,
    // packed with the newest as the most significant of the 2r bits).
    let solve = |label: usize| -> u8 {
        let input = (label >> span) as u8;
        let history = label & history_mask;
        match direction {
            ToggleDirection::Left => main.output(history) ^ input,
            ToggleDirection::Right => {
                let known = history.reverse_bits() >> (usize::BITS as usize - span);
                main.output(known << 1) ^ input
            }
        }
    };
    let main_index = |label: usize| border_count + label;

    let mut states = Vec::with_capacity(border_count + main_count);
    for k in 0..border_count {
        let depth = (k + 1).ilog2() as usize;
        let output = (k > 0).then(|| ((k + 1) & 1) as u8 ^ flip);
        let next = if depth < span {
            [2 * k + 1, 2 * k + 2]
        } else {
            // Leaf: the path bits, newest last, are the low bits of k + 1.
            let path = (k + 1) & history_mask;
            let history = (0..span).fold(0, |acc, i| (acc << 1) | (((path >> i) & 1) ^ flip as usize));
            [main_index(history), main_index((1 << span) | history)]
        };
        states.push(State {
            kind: StateKind::Border(k),
            output,
            next,
        });
    }
    for label in 0..main_count {
        let solved = solve(label) as usize;
        let history = (solved << (span - 1)) | ((label & history_mask) >> 1);
        states.push(State {
            kind: StateKind::Main(label),
            output: Some(solved as u8),
            next: [main_index(history), main_index((1 << span) | history)],
        });
    }
    Ok(Transducer {
        radius,
        direction,
        states,
        border_count,
    })
}

impl Transducer {
    pub fn radius(&self) -> usize {
        self.radius
    }

    pub fn direction(&self) -> ToggleDirection {
        self.direction
    }

    pub fn states(&self) -> &[State] {
        &self.states
    }

    pub fn initial(&self) -> usize {
        0
    }

    /// Indices of the main states, in label order.
    pub fn main_states(&self) -> std::ops::Range<usize> {
        self.border_count..self.states.len()
    }

    /// Feeds `input` from the initial state; returns the visited states
    /// (initial included) and the non-empty outputs.
    pub fn run(&self, input: &[u8]) -> Result<(Vec<usize>, Vec<u8>)> {
        let mut state = self.initial();
        let mut path = vec![state];
        let mut out = Vec::with_capacity(input.len());
        for (i, &bit) in input.iter().enumerate() {
            if bit > 1 {
                return Err(HcaError::InvalidCell { index: i, value: bit });
            }
            state = self.states[state].next[bit as usize];
            path.push(state);
            out.extend(self.states[state].output);
        }
        Ok((path, out))
    }

    /// Pre-image of a periodic configuration, computed by the machine.
    pub fn backward_step(&self, config: &Lattice) -> Result<Lattice> {
        let n = config.len();
        let span = 2 * self.radius;
        if n < span + 2 {
            return Err(HcaError::InputTooShort { len: n, min: span + 2 });
        }
        let order: Vec<usize> = match self.direction {
            ToggleDirection::Left => (0..n).map(|j| (span - 1 + n - j) % n).collect(),
            ToggleDirection::Right => (0..n).collect(),
        };
        let input: Vec<u8> = order.iter().map(|&i| config.get(i)).collect();
        let (_, out) = self.run(&input)?;
        let mut cells = vec![0u8; n];
        for (j, bit) in out.into_iter().enumerate() {
            let target = match self.direction {
                ToggleDirection::Left => (self.radius - 1 + n - j) % n,
                ToggleDirection::Right => (self.radius + j) % n,
            };
            cells[target] = bit;
        }
        Lattice::from_cells(cells)
    }

    /// Adjacency lists of the main states (indices relative to the first
    /// main state, so node `i` is `q_i`).
    pub fn main_adjacency(&self) -> Vec<Vec<usize>> {
        self.main_states()
            .map(|s| {
                let mut succ: Vec<usize> = self.states[s].next.iter().map(|&t| t - self.border_count).collect();
                succ.dedup();
                succ
            })
            .collect()
    }

    /// DOT digraph with states labelled `name / output` and edges by input.
    pub fn to_dot(&self) -> String {
        let mut dot = String::from("digraph transducer {\n  rankdir=LR;\n");
        let _ = writeln!(dot, "  start [shape=point];");
        for state in &self.states {
            let out = state.output.map_or("ε".to_string(), |b| b.to_string());
            let shape = match state.kind {
                StateKind::Border(_) => "box",
                StateKind::Main(_) => "circle",
            };
            let _ = writeln!(dot, "  {0} [shape={shape}, label=\"{0} / {out}\"];", state.name());
        }
        let _ = writeln!(dot, "  start -> {};", self.states[self.initial()].name());
        for state in &self.states {
            for (bit, &t) in state.next.iter().enumerate() {
                let _ = writeln!(dot, "  {} -> {} [label=\"{bit}\"];", state.name(), self.states[t].name());
            }
        }
        dot.push_str("}\n");
        dot
    }
}

/// DOT text for a transducer.
pub fn export_dot(t: &Transducer) -> String {
    t.to_dot()
}

/// Every directed Hamiltonian cycle, each written from node 0 without the
/// closing repeat.
pub fn hamiltonian_cycles_in(adjacency: &[Vec<usize>]) -> Result<Vec<Vec<usize>>> {
    let n = adjacency.len();
    if n > MAX_HAMILTONIAN_NODES {
        return Err(HcaError::LimitExceeded {
            what: "Hamiltonian search nodes",
            value: n,
            limit: MAX_HAMILTONIAN_NODES,
        });
    }
    let mut cycles = Vec::new();
    if n == 0 {
        return Ok(cycles);
    }
    let mut path = vec![0usize];
    let mut visited = vec![false; n];
    visited[0] = true;
    extend_path(adjacency, &mut path, &mut visited, &mut cycles);
    Ok(cycles)
}

fn extend_path(adj: &[Vec<usize>], path: &mut Vec<usize>, visited: &mut [bool], cycles: &mut Vec<Vec<usize>>) {
    let last = *path.last().expect("path starts non-empty");
    if path.len() == adj.len() {
        if adj[last].contains(&0) {
            cycles.push(path.clone());
        }
        return;
    }
    for &next in &adj[last] {
        if !visited[next] {
            visited[next] = true;
            path.push(next);
            extend_path(adj, path, visited, cycles);
            path.pop();
            visited[next] = false;
        }
    }
}

/// Hamiltonian cycles over the main states, as main-state labels.
pub fn hamiltonian_cycles(t: &Transducer) -> Result<Vec<Vec<usize>>> {
    hamiltonian_cycles_in(&t.main_adjacency())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::engine::{preimage_step, HybridStepConfig};
    use crate::lattice::Direction::{Left, Right};

    fn rule30() -> Transducer {
        build_backward_transducer(&Rule::elementary(30), &Rule::elementary(15)).unwrap()
    }

    fn bits(text: &str) -> Vec<u8> {
        text.bytes().map(|c| c - b'0').collect()
    }

    #[test]
    fn worked_example() {
        let t = rule30();
        let s = Lattice::from_bit_str("0100101").unwrap();
        assert_eq!(t.backward_step(&s).unwrap().to_string(), "0110101");
        let (path, _) = t.run(&bits("1010100")).unwrap();
        let names: Vec<String> = path.iter().map(|&i| t.states()[i].name()).collect();
        assert_eq!(names, ["s0", "s2", "s5", "q6", "q1", "q6", "q1", "q2"]);
    }

    #[test]
    fn rule30_cycles() {
        let cycles = hamiltonian_cycles(&rule30()).unwrap();
        assert_eq!(cycles.len(), 2);
        assert!(cycles.contains(&vec![0, 4, 6, 1, 2, 3, 7, 5]));
        assert!(cycles.contains(&vec![0, 4, 2, 3, 7, 1, 6, 5]));
    }

    #[test]
    fn deterministic_and_total() {
        let t = rule30();
        assert_eq!(t.states().len(), 7 + 8);
        for state in t.states() {
            assert!(state.next.iter().all(|&n| n < t.states().len()));
        }
        for adj in t.main_adjacency() {
            assert_eq!(adj.len(), 2);
        }
    }

    fn toggle_pairs() -> Vec<(Rule, Rule, ToggleDirection)> {
        let mut pairs = Vec::new();
        for number in 0..=255u8 {
            let main = Rule::elementary(number);
            for (dir, borders) in [(Left, [15u8, 240]), (Right, [85, 170])] {
                if main.is_toggle(dir) {
                    for b in borders {
                        pairs.push((main.clone(), Rule::elementary(b), dir));
                    }
                }
            }
        }
        pairs
    }

    #[test]
    fn matches_engine_on_every_small_configuration() {
        for (main, border, dir) in toggle_pairs() {
            let t = build_backward_transducer(&main, &border).unwrap();
            for n in [4usize, 7, 8] {
                let cfg = HybridStepConfig::new(main.clone(), border.clone(), n, dir).unwrap();
                for code in 0u32..(1 << n) {
                    let s = Lattice::from_bools((0..n).map(|i| (code >> i) & 1 == 1));
                    assert_eq!(t.backward_step(&s).unwrap(), preimage_step(&s, &cfg).unwrap());
                }
            }
        }
    }

    #[test]
    fn radius2_machine_matches_engine() {
        let main = Rule::with_toggle(2, (0..32).map(|n| ((n >> 4) ^ (n & 1) ^ ((n >> 2) & 1)) as u8).collect::<Vec<_>>(), Left).unwrap();
        let border = Rule::from_table(2, (0..32).map(|n| (n >> 4) as u8).collect::<Vec<_>>()).unwrap();
        let t = build_backward_transducer(&main, &border).unwrap();
        assert_eq!(t.main_states().len(), 32);
        let cfg = HybridStepConfig::new(main, border, 9, Left).unwrap();
        for code in 0u32..512 {
            let s = Lattice::from_bools((0..9).map(|i| (code >> i) & 1 == 1));
            assert_eq!(t.backward_step(&s).unwrap(), preimage_step(&s, &cfg).unwrap());
        }
        assert!(hamiltonian_cycles(&t).is_err());
    }

    #[test]
    fn guards() {
        assert!(build_backward_transducer(&Rule::elementary(110), &Rule::elementary(15)).is_err());
        assert!(build_backward_transducer(&Rule::elementary(30), &Rule::elementary(85)).is_err());
        let big = Rule::from_table(3, vec![0u8; 128]).unwrap();
        assert!(matches!(
            build_backward_transducer(&big, &big),
            Err(HcaError::LimitExceeded { .. })
        ));
    }

    #[test]
    fn cycle_enumeration_basics() {
        let complete = vec![vec![1, 2], vec![0, 2], vec![0, 1]];
        assert_eq!(hamiltonian_cycles_in(&complete).unwrap().len(), 2);
        let path = vec![vec![1], vec![2], vec![]];
        assert!(hamiltonian_cycles_in(&path).unwrap().is_empty());
        assert!(hamiltonian_cycles_in(&vec![vec![]; 17]).is_err());
    }

    #[test]
    fn dot_is_stable() {
        let dot = export_dot(&rule30());
        assert_eq!(dot, export_dot(&rule30()));
        assert!(dot.starts_with("digraph transducer {"));
        assert_eq!(dot.matches("shape=circle").count(), 8);
        assert!(dot.contains("q6 [shape=circle, label=\"q6 / 0\"];"));
        assert!(dot.contains("s0 -> s2 [label=\"1\"];"));
    }
}
