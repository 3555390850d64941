//! Acyclic multi-mode circuits.
//!
//! A netlist is an ordered list of two-operand gate nodes over named
//! primary inputs and the constants 0/1, with a single designated output.
//! Nodes may only reference earlier nodes, so the list order is a
//! topological order and cycles are unrepresentable. `m = 1` expresses a
//! plain traditional circuit in the same machinery.
//!
//! The line-based text format round-trips exactly:
//!
//! ```text
//! inputs a b
//! n1 = NAND/NOR(a, b)
//! n2 = NAND/NOR(n1, n1)
//! output n2
//! ```
//!
//! Comments start with `#`. Operands are input names, node ids, or the
//! constants `0`/`1`. Unary gates still carry two operands; the unused
//! one is written as `0` by convention.

use std::collections::HashMap;
use std::fmt;

use thiserror::Error;

use crate::function::{BinaryFunction, PolyFunction, UnaryFunction};
use crate::gate::{BaseGate, PolyGate};

/// A reference a node operand (or the netlist output) can hold.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Operand {
    /// Primary input, by index into `input_names`.
    Input(usize),
    /// Earlier node, by index into `nodes`.
    Node(usize),
    Const(bool),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Node {
    pub id: String,
    pub gate: PolyGate,
    pub a: Operand,
    pub b: Operand,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Netlist {
    m: usize,
    input_names: Vec<String>,
    nodes: Vec<Node>,
    output: Operand,
}

impl Netlist {
    /// A gate-free netlist passing one input straight to the output.
    pub fn wire(m: usize, input_name: &str) -> Netlist {
        assert!(m >= 1);
        Netlist {
            m,
            input_names: vec![input_name.to_string()],
            nodes: Vec::new(),
            output: Operand::Input(0),
        }
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn input_names(&self) -> &[String] {
        &self.input_names
    }

    pub fn nodes(&self) -> &[Node] {
        &self.nodes
    }

    pub fn output(&self) -> Operand {
        self.output
    }

    pub fn node_count(&self) -> usize {
        self.nodes.len()
    }

    /// Evaluate the circuit in a 1-based mode with positional input values.
    pub fn simulate(&self, mode: usize, inputs: &[bool]) -> Result<bool, SimulateError> {
        if mode == 0 || mode > self.m {
            return Err(SimulateError::ModeOutOfRange { mode, m: self.m });
        }
        if inputs.len() != self.input_names.len() {
            return Err(SimulateError::WrongInputCount {
                expected: self.input_names.len(),
                got: inputs.len(),
            });
        }
        let mut values = Vec::with_capacity(self.nodes.len());
        let read = |op: Operand, values: &[bool]| -> bool {
            match op {
                Operand::Input(i) => inputs[i],
                Operand::Node(i) => values[i],
                Operand::Const(c) => c,
            }
        };
        for node in &self.nodes {
            let a = read(node.a, &values);
            let b = read(node.b, &values);
            let g = node.gate.modes[mode - 1];
            values.push(crate::gate::eval_base(g, a, b));
        }
        Ok(read(self.output, &values))
    }

    /// Evaluate with inputs given by name.
    pub fn simulate_named(
        &self,
        mode: usize,
        assignment: &HashMap<String, bool>,
    ) -> Result<bool, SimulateError> {
        let mut inputs = Vec::with_capacity(self.input_names.len());
        for name in &self.input_names {
            match assignment.get(name) {
                Some(&v) => inputs.push(v),
                None => return Err(SimulateError::MissingInput { name: name.clone() }),
            }
        }
        self.simulate(mode, &inputs)
    }

    /// Exhaustive truth tables: for each mode, one output bit per input
    /// assignment. Row r assigns input j the bit `(r >> (k-1-j)) & 1`,
    /// so the first declared input is the most significant.
    pub fn tables(&self) -> Result<Vec<Vec<bool>>, SimulateError> {
        let k = self.input_names.len();
        let rows = 1usize << k;
        let mut per_mode = Vec::with_capacity(self.m);
        for mode in 1..=self.m {
            let mut table = Vec::with_capacity(rows);
            for r in 0..rows {
                let inputs: Vec<bool> =
                    (0..k).map(|j| (r >> (k - 1 - j)) & 1 == 1).collect();
                table.push(self.simulate(mode, &inputs)?);
            }
            per_mode.push(table);
        }
        Ok(per_mode)
    }

    /// Per-mode truth tables as a [`PolyFunction`]; two inputs give the
    /// binary signature, one input the unary signature.
    pub fn truth_table_per_mode(&self) -> Result<PolyFunction, TableError> {
        let k = self.input_names.len();
        match k {
            1 => {
                let tables = self.tables()?;
                let packed: Vec<u8> = tables
                    .iter()
                    .map(|t| (t[0] as u8) | ((t[1] as u8) << 1))
                    .collect();
                Ok(PolyFunction::Unary(UnaryFunction::from_tables(&packed)))
            }
            2 => {
                let tables = self.tables()?;
                let packed: Vec<u8> = tables
                    .iter()
                    .map(|t| {
                        (t[0] as u8) | ((t[1] as u8) << 1) | ((t[2] as u8) << 2) | ((t[3] as u8) << 3)
                    })
                    .collect();
                Ok(PolyFunction::Binary(BinaryFunction::from_tables(&packed)))
            }
            _ => Err(TableError::UnsupportedArity { inputs: k }),
        }
    }

    /// Longest gate-count path from any input or constant to the output.
    ///
    /// Only pins the gate responds to in some mode carry signal; a pin no
    /// mode ever reads (the convention slot of a unary gate, both pins of
    /// a constant gate) contributes no path.
    pub fn depth(&self) -> usize {
        let mut depths = Vec::with_capacity(self.nodes.len());
        let op_depth = |op: Operand, depths: &[usize]| -> usize {
            match op {
                Operand::Node(i) => depths[i],
                _ => 0,
            }
        };
        for node in &self.nodes {
            let mut d = 0;
            if node.gate.reads_a() {
                d = d.max(op_depth(node.a, &depths));
            }
            if node.gate.reads_b() {
                d = d.max(op_depth(node.b, &depths));
            }
            depths.push(d + 1);
        }
        op_depth(self.output, &depths)
    }

    /// Replace every gate according to the mapping. Gate-for-gate
    /// substitution preserves node ids; netlist replacements are spliced
    /// in with the node's operands feeding the replacement's inputs.
    pub fn substitute(&self, mapping: &GateMapping) -> Result<Netlist, SubstituteError> {
        match mapping {
            GateMapping::BaseToPoly(map) => self.substitute_base(map),
            GateMapping::PolyToNetlist(map) => self.substitute_netlists(map),
        }
    }

    fn substitute_base(
        &self,
        map: &HashMap<BaseGate, PolyGate>,
    ) -> Result<Netlist, SubstituteError> {
        let mut target_m = None;
        let mut nodes = Vec::with_capacity(self.nodes.len());
        for node in &self.nodes {
            if node.gate.m() != 1 {
                return Err(SubstituteError::NotTraditional { id: node.id.clone() });
            }
            let replacement = map
                .get(&node.gate.modes[0])
                .ok_or_else(|| SubstituteError::UnmappedGate { gate: node.gate.to_string() })?;
            match target_m {
                None => target_m = Some(replacement.m()),
                Some(m) if m != replacement.m() => {
                    return Err(SubstituteError::MixedReplacementModes)
                }
                _ => {}
            }
            nodes.push(Node {
                id: node.id.clone(),
                gate: replacement.clone(),
                a: node.a,
                b: node.b,
            });
        }
        Ok(Netlist {
            m: target_m.unwrap_or(self.m),
            input_names: self.input_names.clone(),
            nodes,
            output: self.output,
        })
    }

    fn substitute_netlists(
        &self,
        map: &HashMap<PolyGate, Netlist>,
    ) -> Result<Netlist, SubstituteError> {
        let mut target_m = None;
        for replacement in map.values() {
            match target_m {
                None => target_m = Some(replacement.m()),
                Some(m) if m != replacement.m() => {
                    return Err(SubstituteError::MixedReplacementModes)
                }
                _ => {}
            }
        }
        let target_m = target_m.unwrap_or(self.m);

        let mut nodes: Vec<Node> = Vec::new();
        let mut used_ids: HashMap<String, ()> =
            self.input_names.iter().map(|n| (n.clone(), ())).collect();
        let mut remap: Vec<Operand> = Vec::with_capacity(self.nodes.len());
        let resolve = |op: Operand, remap: &[Operand]| -> Operand {
            match op {
                Operand::Node(i) => remap[i],
                other => other,
            }
        };

        for node in &self.nodes {
            let replacement = map
                .get(&node.gate)
                .ok_or_else(|| SubstituteError::UnmappedGate { gate: node.gate.to_string() })?;
            let pins = replacement.input_names.len();
            if pins == 0 || pins > 2 {
                return Err(SubstituteError::BadReplacementArity {
                    gate: node.gate.to_string(),
                    inputs: pins,
                });
            }
            let env = [resolve(node.a, &remap), resolve(node.b, &remap)];
            // Splice the replacement body, rewriting its operands into
            // this netlist's index space.
            let mut inner_map: Vec<Operand> = Vec::with_capacity(replacement.nodes.len());
            for (ri, rnode) in replacement.nodes.iter().enumerate() {
                let lift = |op: Operand, inner_map: &[Operand]| -> Operand {
                    match op {
                        Operand::Input(i) => env[i],
                        Operand::Node(i) => inner_map[i],
                        Operand::Const(c) => Operand::Const(c),
                    }
                };
                let produces_output = replacement.output == Operand::Node(ri);
                let mut id = if produces_output {
                    node.id.clone()
                } else {
                    format!("{}_{}", node.id, ri + 1)
                };
                while used_ids.contains_key(&id) {
                    id.push('x');
                }
                used_ids.insert(id.clone(), ());
                let new_index = nodes.len();
                nodes.push(Node {
                    id,
                    gate: rnode.gate.clone(),
                    a: lift(rnode.a, &inner_map),
                    b: lift(rnode.b, &inner_map),
                });
                inner_map.push(Operand::Node(new_index));
            }
            let out = match replacement.output {
                Operand::Node(i) => inner_map[i],
                Operand::Input(i) => env[i],
                Operand::Const(c) => Operand::Const(c),
            };
            remap.push(out);
        }
        Ok(Netlist {
            m: target_m,
            input_names: self.input_names.clone(),
            nodes,
            output: resolve(self.output, &remap),
        })
    }
}

/// How [`Netlist::substitute`] rewrites gates.
#[derive(Clone, Debug)]
pub enum GateMapping {
    /// Lift a traditional (m = 1) circuit: each base gate becomes a
    /// polymorphic gate.
    BaseToPoly(HashMap<BaseGate, PolyGate>),
    /// Replace each polymorphic gate by a sub-netlist with one or two
    /// inputs; the node's operands are spliced onto those inputs.
    PolyToNetlist(HashMap<PolyGate, Netlist>),
}

impl GateMapping {
    /// Gate-for-gate replacement, expressed as single-node netlists.
    pub fn poly_to_poly<I: IntoIterator<Item = (PolyGate, PolyGate)>>(pairs: I) -> GateMapping {
        let map = pairs
            .into_iter()
            .map(|(from, to)| {
                let m = to.m();
                let mut b = NetlistBuilder::new(m, &["a", "b"]);
                let out = b.gate(to, Operand::Input(0), Operand::Input(1));
                (from, b.build(out))
            })
            .collect();
        GateMapping::PolyToNetlist(map)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SimulateError {
    #[error("mode {mode} out of range 1..={m}")]
    ModeOutOfRange { mode: usize, m: usize },
    #[error("expected {expected} input values, got {got}")]
    WrongInputCount { expected: usize, got: usize },
    #[error("assignment is missing input \"{name}\"")]
    MissingInput { name: String },
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TableError {
    #[error("per-mode gate tables need 1 or 2 inputs, netlist has {inputs}")]
    UnsupportedArity { inputs: usize },
    #[error(transparent)]
    Simulate(#[from] SimulateError),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SubstituteError {
    #[error("no mapping for gate {gate}")]
    UnmappedGate { gate: String },
    #[error("node {id} is not a traditional (single-mode) gate")]
    NotTraditional { id: String },
    #[error("replacement gates/netlists disagree on mode count")]
    MixedReplacementModes,
    #[error("replacement for {gate} has {inputs} inputs, expected 1 or 2")]
    BadReplacementArity { gate: String, inputs: usize },
}

/// Incremental construction with structural sharing: identical
/// (gate, a, b) applications collapse to one node.
pub struct NetlistBuilder {
    m: usize,
    input_names: Vec<String>,
    nodes: Vec<Node>,
    cse: HashMap<(PolyGate, Operand, Operand), usize>,
}

impl NetlistBuilder {
    pub fn new(m: usize, input_names: &[&str]) -> NetlistBuilder {
        assert!(m >= 1);
        NetlistBuilder {
            m,
            input_names: input_names.iter().map(|s| s.to_string()).collect(),
            nodes: Vec::new(),
            cse: HashMap::new(),
        }
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn input(&self, index: usize) -> Operand {
        assert!(index < self.input_names.len());
        Operand::Input(index)
    }

    /// Append a gate application, reusing an existing node for a repeated
    /// application.
    pub fn gate(&mut self, gate: PolyGate, a: Operand, b: Operand) -> Operand {
        assert_eq!(gate.m(), self.m, "gate mode count must match the netlist");
        if let Some(&idx) = self.cse.get(&(gate.clone(), a, b)) {
            return Operand::Node(idx);
        }
        let idx = self.nodes.len();
        let id = format!("n{}", idx + 1);
        self.cse.insert((gate.clone(), a, b), idx);
        self.nodes.push(Node { id, gate, a, b });
        Operand::Node(idx)
    }

    /// Splice a sub-netlist, feeding `args` to its primary inputs.
    /// Returns the operand carrying the sub-netlist's output.
    pub fn inline(&mut self, cell: &Netlist, args: &[Operand]) -> Operand {
        assert_eq!(cell.m(), self.m, "cell mode count must match the netlist");
        assert_eq!(args.len(), cell.input_names.len(), "argument count must match cell inputs");
        let mut map: Vec<Operand> = Vec::with_capacity(cell.nodes.len());
        for node in &cell.nodes {
            let lift = |op: Operand, map: &[Operand]| match op {
                Operand::Input(i) => args[i],
                Operand::Node(i) => map[i],
                Operand::Const(c) => Operand::Const(c),
            };
            let a = lift(node.a, &map);
            let b = lift(node.b, &map);
            let out = self.gate(node.gate.clone(), a, b);
            map.push(out);
        }
        match cell.output {
            Operand::Node(i) => map[i],
            Operand::Input(i) => args[i],
            Operand::Const(c) => Operand::Const(c),
        }
    }

    pub fn build(self, output: Operand) -> Netlist {
        if let Operand::Node(i) = output {
            assert!(i < self.nodes.len());
        }
        Netlist {
            m: self.m,
            input_names: self.input_names,
            nodes: self.nodes,
            output,
        }
    }
}

impl fmt::Display for Netlist {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "inputs")?;
        for name in &self.input_names {
            write!(f, " {name}")?;
        }
        writeln!(f)?;
        let op_text = |op: Operand| -> String {
            match op {
                Operand::Input(i) => self.input_names[i].clone(),
                Operand::Node(i) => self.nodes[i].id.clone(),
                Operand::Const(c) => if c { "1" } else { "0" }.to_string(),
            }
        };
        for node in &self.nodes {
            let mut gate_text = String::new();
            for (i, g) in node.gate.modes.iter().enumerate() {
                if i > 0 {
                    gate_text.push('/');
                }
                gate_text.push_str(g.name());
            }
            writeln!(f, "{} = {}({}, {})", node.id, gate_text, op_text(node.a), op_text(node.b))?;
        }
        writeln!(f, "output {}", op_text(self.output))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("line {line}: {kind}")]
pub struct NetlistParseError {
    pub line: usize,
    pub kind: NetlistParseErrorKind,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum NetlistParseErrorKind {
    #[error("expected `inputs ...` as the first line")]
    MissingInputs,
    #[error("invalid identifier \"{0}\"")]
    BadIdentifier(String),
    #[error("duplicate name \"{0}\"")]
    DuplicateName(String),
    #[error("unknown gate name \"{0}\"")]
    UnknownGate(String),
    #[error("malformed node line")]
    BadNodeLine,
    #[error("unknown operand \"{0}\" (operands may only reference inputs or earlier nodes)")]
    UnknownOperand(String),
    #[error("gate has {found} modes, netlist uses {expected}")]
    ModeCountMismatch { expected: usize, found: usize },
    #[error("missing `output <ref>` line")]
    MissingOutput,
    #[error("unexpected line after `output`")]
    TrailingLine,
    #[error("second `output` line")]
    DuplicateOutput,
}

fn valid_identifier(s: &str) -> bool {
    let mut chars = s.chars();
    match chars.next() {
        Some(c) if c.is_ascii_alphabetic() || c == '_' => {}
        _ => return false,
    }
    if !chars.all(|c| c.is_ascii_alphanumeric() || c == '_') {
        return false;
    }
    !matches!(s, "inputs" | "output")
}

/// Parse the netlist text format. Operand references are resolved as the
/// lines are read, so forward references and cycles are rejected here.
pub fn parse_netlist(text: &str) -> Result<Netlist, NetlistParseError> {
    let err = |line: usize, kind: NetlistParseErrorKind| NetlistParseError { line, kind };
    let mut input_names: Vec<String> = Vec::new();
    let mut names: HashMap<String, Operand> = HashMap::new();
    let mut nodes: Vec<Node> = Vec::new();
    let mut output: Option<Operand> = None;
    let mut m: Option<usize> = None;
    let mut seen_inputs = false;

    for (lineno, raw) in text.lines().enumerate() {
        let line_no = lineno + 1;
        let line = match raw.find('#') {
            Some(pos) => &raw[..pos],
            None => raw,
        }
        .trim();
        if line.is_empty() {
            continue;
        }
        if output.is_some() {
            return Err(err(line_no, NetlistParseErrorKind::TrailingLine));
        }
        if !seen_inputs {
            let Some(rest) = line.strip_prefix("inputs") else {
                return Err(err(line_no, NetlistParseErrorKind::MissingInputs));
            };
            if !(rest.is_empty() || rest.starts_with(char::is_whitespace)) {
                return Err(err(line_no, NetlistParseErrorKind::MissingInputs));
            }
            for name in rest.split_whitespace() {
                if !valid_identifier(name) {
                    return Err(err(line_no, NetlistParseErrorKind::BadIdentifier(name.into())));
                }
                if names.contains_key(name) {
                    return Err(err(line_no, NetlistParseErrorKind::DuplicateName(name.into())));
                }
                names.insert(name.to_string(), Operand::Input(input_names.len()));
                input_names.push(name.to_string());
            }
            seen_inputs = true;
            continue;
        }
        if let Some(rest) = line.strip_prefix("output") {
            if !rest.starts_with(char::is_whitespace) {
                return Err(err(line_no, NetlistParseErrorKind::BadNodeLine));
            }
            let op_text = rest.trim();
            let op = parse_operand(op_text, &names)
                .ok_or_else(|| err(line_no, NetlistParseErrorKind::UnknownOperand(op_text.into())))?;
            output = Some(op);
            continue;
        }

        // <id> = <GATE[/GATE...]>(<op>, <op>)
        let (id_part, rhs) = line
            .split_once('=')
            .ok_or_else(|| err(line_no, NetlistParseErrorKind::BadNodeLine))?;
        let id = id_part.trim();
        if !valid_identifier(id) {
            return Err(err(line_no, NetlistParseErrorKind::BadIdentifier(id.into())));
        }
        if names.contains_key(id) {
            return Err(err(line_no, NetlistParseErrorKind::DuplicateName(id.into())));
        }
        let rhs = rhs.trim();
        let (gate_part, args_part) = rhs
            .split_once('(')
            .ok_or_else(|| err(line_no, NetlistParseErrorKind::BadNodeLine))?;
        let args_part = args_part
            .trim_end()
            .strip_suffix(')')
            .ok_or_else(|| err(line_no, NetlistParseErrorKind::BadNodeLine))?;
        let mut modes = Vec::new();
        for name in gate_part.trim().split('/') {
            let g = BaseGate::parse_name(name)
                .ok_or_else(|| err(line_no, NetlistParseErrorKind::UnknownGate(name.trim().into())))?;
            modes.push(g);
        }
        match m {
            None => m = Some(modes.len()),
            Some(expected) if expected != modes.len() => {
                return Err(err(
                    line_no,
                    NetlistParseErrorKind::ModeCountMismatch { expected, found: modes.len() },
                ))
            }
            _ => {}
        }
        let args: Vec<&str> = args_part.split(',').map(str::trim).collect();
        if args.len() != 2 {
            return Err(err(line_no, NetlistParseErrorKind::BadNodeLine));
        }
        let a = parse_operand(args[0], &names)
            .ok_or_else(|| err(line_no, NetlistParseErrorKind::UnknownOperand(args[0].into())))?;
        let b = parse_operand(args[1], &names)
            .ok_or_else(|| err(line_no, NetlistParseErrorKind::UnknownOperand(args[1].into())))?;
        names.insert(id.to_string(), Operand::Node(nodes.len()));
        nodes.push(Node { id: id.to_string(), gate: PolyGate::new(modes), a, b });
    }

    if !seen_inputs {
        return Err(err(1, NetlistParseErrorKind::MissingInputs));
    }
    let output = output.ok_or_else(|| {
        err(text.lines().count().max(1), NetlistParseErrorKind::MissingOutput)
    })?;
    Ok(Netlist {
        m: m.unwrap_or(1),
        input_names,
        nodes,
        output,
    })
}

fn parse_operand(text: &str, names: &HashMap<String, Operand>) -> Option<Operand> {
    match text {
        "0" => Some(Operand::Const(false)),
        "1" => Some(Operand::Const(true)),
        name => names.get(name).copied(),
    }
}
