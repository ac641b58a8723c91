//! Gate-level circuits over data and ancilla wires, with metrics and a
//! line-oriented text format.

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum GateKind {
    H,
    S,
    Sdg,
    X,
    Y,
    Z,
    Cnot,
    Cz,
    Swap,
    /// Controlled-S; not Clifford.
    Cs,
}

impl GateKind {
    pub fn arity(self) -> usize {
        match self {
            GateKind::Cnot | GateKind::Cz | GateKind::Swap | GateKind::Cs => 2,
            _ => 1,
        }
    }

    pub fn is_clifford(self) -> bool {
        self != GateKind::Cs
    }

    pub fn name(self) -> &'static str {
        match self {
            GateKind::H => "H",
            GateKind::S => "S",
            GateKind::Sdg => "SDG",
            GateKind::X => "X",
            GateKind::Y => "Y",
            GateKind::Z => "Z",
            GateKind::Cnot => "CNOT",
            GateKind::Cz => "CZ",
            GateKind::Swap => "SWAP",
            GateKind::Cs => "CS",
        }
    }
}

impl FromStr for GateKind {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        Ok(match s {
            "H" => GateKind::H,
            "S" => GateKind::S,
            "SDG" => GateKind::Sdg,
            "X" => GateKind::X,
            "Y" => GateKind::Y,
            "Z" => GateKind::Z,
            "CNOT" => GateKind::Cnot,
            "CZ" => GateKind::Cz,
            "SWAP" => GateKind::Swap,
            "CS" => GateKind::Cs,
            _ => return Err(format!("unknown gate `{s}`")),
        })
    }
}

/// A gate; for CNOT and CS, `a` is the control. `b` is ignored for one-qubit gates.
#[derive(Clone, Copy, PartialEq, Eq, Hash)]
pub struct Gate {
    pub kind: GateKind,
    pub a: u32,
    pub b: u32,
}

impl Gate {
    pub fn one(kind: GateKind, w: usize) -> Gate {
        debug_assert_eq!(kind.arity(), 1);
        Gate {
            kind,
            a: w as u32,
            b: w as u32,
        }
    }

    pub fn two(kind: GateKind, a: usize, b: usize) -> Gate {
        debug_assert_eq!(kind.arity(), 2);
        debug_assert_ne!(a, b);
        Gate {
            kind,
            a: a as u32,
            b: b as u32,
        }
    }

    pub fn h(w: usize) -> Gate {
        Gate::one(GateKind::H, w)
    }
    pub fn s(w: usize) -> Gate {
        Gate::one(GateKind::S, w)
    }
    pub fn sdg(w: usize) -> Gate {
        Gate::one(GateKind::Sdg, w)
    }
    pub fn x(w: usize) -> Gate {
        Gate::one(GateKind::X, w)
    }
    pub fn y(w: usize) -> Gate {
        Gate::one(GateKind::Y, w)
    }
    pub fn z(w: usize) -> Gate {
        Gate::one(GateKind::Z, w)
    }
    pub fn cnot(control: usize, target: usize) -> Gate {
        Gate::two(GateKind::Cnot, control, target)
    }
    pub fn cz(a: usize, b: usize) -> Gate {
        Gate::two(GateKind::Cz, a, b)
    }
    pub fn swap(a: usize, b: usize) -> Gate {
        Gate::two(GateKind::Swap, a, b)
    }
    pub fn cs(control: usize, target: usize) -> Gate {
        Gate::two(GateKind::Cs, control, target)
    }

    pub fn wires(&self) -> impl Iterator<Item = usize> {
        let two = self.kind.arity() == 2;
        std::iter::once(self.a as usize).chain(two.then_some(self.b as usize))
    }

    pub fn max_wire(&self) -> usize {
        if self.kind.arity() == 2 {
            self.a.max(self.b) as usize
        } else {
            self.a as usize
        }
    }

    /// The inverse gate as a short gate list.
    pub fn inverse(&self) -> Vec<Gate> {
        match self.kind {
            GateKind::S => vec![Gate { kind: GateKind::Sdg, ..*self }],
            GateKind::Sdg => vec![Gate { kind: GateKind::S, ..*self }],
            // CS^{-1} = CS^3 = CZ · CS
            GateKind::Cs => vec![Gate { kind: GateKind::Cz, ..*self }, *self],
            _ => vec![*self],
        }
    }
}

impl fmt::Debug for Gate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.kind.arity() == 2 {
            write!(f, "{} {} {}", self.kind.name(), self.a, self.b)
        } else {
            write!(f, "{} {}", self.kind.name(), self.a)
        }
    }
}

/// A circuit on `n_data` data wires followed by `n_ancilla` ancilla wires.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CliffordCircuit {
    pub n_data: usize,
    pub n_ancilla: usize,
    pub gates: Vec<Gate>,
    pub clifford_only: bool,
    pub ancilla_restored: bool,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct CircuitMetrics {
    pub gate_count: usize,
    pub depth: usize,
    pub ancilla_count: usize,
}

impl AsRef<CliffordCircuit> for CliffordCircuit {
    fn as_ref(&self) -> &CliffordCircuit {
        self
    }
}

impl CliffordCircuit {
    pub fn new(n_data: usize) -> Self {
        CliffordCircuit {
            n_data,
            n_ancilla: 0,
            gates: Vec::new(),
            clifford_only: true,
            ancilla_restored: true,
        }
    }

    pub fn width(&self) -> usize {
        self.n_data + self.n_ancilla
    }

    pub fn push(&mut self, g: Gate) {
        debug_assert!(g.max_wire() < self.width(), "gate {g:?} outside width {}", self.width());
        if !g.kind.is_clifford() {
            self.clifford_only = false;
        }
        self.gates.push(g);
    }

    /// Structural checks: wire bounds, distinct wires, flag consistency.
    pub fn validate(&self) -> Result<()> {
        for (i, g) in self.gates.iter().enumerate() {
            if g.max_wire() >= self.width() {
                return Err(Error::Domain(format!(
                    "gate {i} ({g:?}) touches a wire outside width {}",
                    self.width()
                )));
            }
            if g.kind.arity() == 2 && g.a == g.b {
                return Err(Error::Domain(format!("gate {i} ({g:?}) repeats a wire")));
            }
            if self.clifford_only && !g.kind.is_clifford() {
                return Err(Error::Domain(format!(
                    "gate {i} ({g:?}) in a circuit flagged Clifford-only"
                )));
            }
        }
        Ok(())
    }

    /// Gates of `a` then gates of `b`; ancillas are shared.
    pub fn compose(a: &CliffordCircuit, b: &CliffordCircuit) -> Result<CliffordCircuit> {
        if a.n_data != b.n_data {
            return Err(Error::Dimension {
                expected: a.n_data,
                got: b.n_data,
            });
        }
        let mut gates = Vec::with_capacity(a.gates.len() + b.gates.len());
        gates.extend_from_slice(&a.gates);
        gates.extend_from_slice(&b.gates);
        Ok(CliffordCircuit {
            n_data: a.n_data,
            n_ancilla: a.n_ancilla.max(b.n_ancilla),
            gates,
            clifford_only: a.clifford_only && b.clifford_only,
            ancilla_restored: a.ancilla_restored && b.ancilla_restored,
        })
    }

    pub fn append(&mut self, other: &CliffordCircuit) -> Result<()> {
        *self = Self::compose(self, other)?;
        Ok(())
    }

    /// The inverse circuit.
    pub fn inverse(&self) -> CliffordCircuit {
        let gates = self.gates.iter().rev().flat_map(|g| g.inverse()).collect();
        CliffordCircuit {
            gates,
            ..self.clone()
        }
    }

    pub fn depth(&self) -> usize {
        let mut level = vec![0usize; self.width()];
        let mut depth = 0;
        for g in &self.gates {
            let l = g.wires().map(|w| level[w]).max().unwrap_or(0) + 1;
            for w in g.wires() {
                level[w] = l;
            }
            depth = depth.max(l);
        }
        depth
    }

    pub fn metrics(&self) -> CircuitMetrics {
        CircuitMetrics {
            gate_count: self.gates.len(),
            depth: self.depth(),
            ancilla_count: self.n_ancilla,
        }
    }

    pub fn serialize(&self) -> String {
        self.serialize_with_comments(&[])
    }

    /// Text form with `# `-prefixed comment lines after the header.
    pub fn serialize_with_comments(&self, comments: &[String]) -> String {
        let mut out = String::with_capacity(16 * self.gates.len() + 128);
        out.push_str(HEADER);
        out.push('\n');
        out.push_str(&format!(
            "n_data {} n_ancilla {} clifford_only {} ancilla_restored {}\n",
            self.n_data,
            self.n_ancilla,
            self.clifford_only as u8,
            self.ancilla_restored as u8
        ));
        for c in comments {
            out.push_str("# ");
            out.push_str(c);
            out.push('\n');
        }
        for g in &self.gates {
            use std::fmt::Write;
            writeln!(out, "{g:?}").unwrap();
        }
        out
    }

    pub fn parse(text: &str) -> Result<CliffordCircuit> {
        Self::parse_with_comments(text).map(|(c, _)| c)
    }

    /// Parse, also returning comment lines with the leading `#` and one space removed.
    pub fn parse_with_comments(text: &str) -> Result<(CliffordCircuit, Vec<String>)> {
        let err = |line: usize, msg: String| Error::Parse { line, msg };
        let mut comments = Vec::new();
        let mut lines = text
            .lines()
            .enumerate()
            .map(|(i, l)| (i + 1, l.trim()))
            .filter(|(_, l)| !l.is_empty());
        let mut next_content = |comments: &mut Vec<String>| {
            for (no, l) in lines.by_ref() {
                if let Some(c) = l.strip_prefix('#') {
                    comments.push(c.strip_prefix(' ').unwrap_or(c).to_string());
                } else {
                    return Some((no, l));
                }
            }
            None
        };
        let (no, first) = next_content(&mut comments).ok_or_else(|| err(1, "empty input".into()))?;
        if first != HEADER {
            return Err(err(no, format!("expected `{HEADER}`")));
        }
        let (no, second) =
            next_content(&mut comments).ok_or_else(|| err(no + 1, "missing width line".into()))?;
        let f: Vec<&str> = second.split_whitespace().collect();
        let keys = ["n_data", "n_ancilla", "clifford_only", "ancilla_restored"];
        if f.len() != 8 || (0..4).any(|i| f[2 * i] != keys[i]) {
            return Err(err(
                no,
                "expected `n_data <int> n_ancilla <int> clifford_only <0|1> ancilla_restored <0|1>`"
                    .into(),
            ));
        }
        let num = |s: &str| s.parse::<usize>().map_err(|e| err(no, format!("`{s}`: {e}")));
        let flag = |s: &str| match s {
            "0" => Ok(false),
            "1" => Ok(true),
            _ => Err(err(no, format!("flag must be 0 or 1, got `{s}`"))),
        };
        let mut c = CliffordCircuit {
            n_data: num(f[1])?,
            n_ancilla: num(f[3])?,
            gates: Vec::new(),
            clifford_only: flag(f[5])?,
            ancilla_restored: flag(f[7])?,
        };
        let width = c.width();
        while let Some((no, l)) = next_content(&mut comments) {
            let mut parts = l.split_whitespace();
            let kind: GateKind = parts.next().unwrap().parse().map_err(|m| err(no, m))?;
            let wires: Vec<usize> = parts
                .map(|w| w.parse::<usize>().map_err(|e| err(no, format!("wire `{w}`: {e}"))))
                .collect::<Result<_>>()?;
            if wires.len() != kind.arity() {
                return Err(err(
                    no,
                    format!("{} takes {} wire(s), got {}", kind.name(), kind.arity(), wires.len()),
                ));
            }
            if let Some(&w) = wires.iter().find(|&&w| w >= width) {
                return Err(err(no, format!("wire {w} is outside width {width}")));
            }
            let g = if kind.arity() == 2 {
                if wires[0] == wires[1] {
                    return Err(err(no, "two-qubit gate on a single wire".into()));
                }
                Gate::two(kind, wires[0], wires[1])
            } else {
                Gate::one(kind, wires[0])
            };
            if c.clifford_only && !kind.is_clifford() {
                return Err(err(no, "CS gate in a circuit flagged clifford_only".into()));
            }
            c.gates.push(g);
        }
        Ok((c, comments))
    }
}

pub const HEADER: &str = "design2-circuit v1";
