//! The 16 two-input gates, polymorphic gates, and gate-set validation.
//!
//! A polymorphic gate carries one ordinary gate per mode; a gate set is
//! valid when every pair of modes is distinguished by at least one member
//! gate. The text grammar used by the CLI and fixtures lives here too:
//! a set is a comma-separated list of poly-gates, a poly-gate is
//! slash-separated gate names, e.g. `NAND/NOR, OR/ANDNB`.

use std::fmt;

use thiserror::Error;

/// One of the 16 two-input combinational gates, identified by its 4-row
/// truth table over inputs (A,B) in row order (0,0),(0,1),(1,0),(1,1).
///
/// `ANDNA(a,b) = !a & b`, `ANDNB(a,b) = a & !b`, `ORNA(a,b) = !a | b`,
/// `ORNB(a,b) = a | !b`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum BaseGate {
    And,
    Or,
    Nand,
    Nor,
    AndNa,
    AndNb,
    Xor,
    Nxor,
    NotA,
    NotB,
    WireA,
    WireB,
    OrNa,
    OrNb,
    Zero,
    One,
}

impl BaseGate {
    /// All 16 gates, in a fixed enumeration order.
    pub const ALL: [BaseGate; 16] = [
        BaseGate::And,
        BaseGate::Or,
        BaseGate::Nand,
        BaseGate::Nor,
        BaseGate::AndNa,
        BaseGate::AndNb,
        BaseGate::Xor,
        BaseGate::Nxor,
        BaseGate::NotA,
        BaseGate::NotB,
        BaseGate::WireA,
        BaseGate::WireB,
        BaseGate::OrNa,
        BaseGate::OrNb,
        BaseGate::Zero,
        BaseGate::One,
    ];

    /// Packed 4-bit truth table; bit `(a << 1) | b` is the output for (a,b).
    pub const fn tt(self) -> u8 {
        match self {
            BaseGate::And => 0b1000,
            BaseGate::Or => 0b1110,
            BaseGate::Nand => 0b0111,
            BaseGate::Nor => 0b0001,
            BaseGate::AndNa => 0b0010,
            BaseGate::AndNb => 0b0100,
            BaseGate::Xor => 0b0110,
            BaseGate::Nxor => 0b1001,
            BaseGate::NotA => 0b0011,
            BaseGate::NotB => 0b0101,
            BaseGate::WireA => 0b1100,
            BaseGate::WireB => 0b1010,
            BaseGate::OrNa => 0b1011,
            BaseGate::OrNb => 0b1101,
            BaseGate::Zero => 0b0000,
            BaseGate::One => 0b1111,
        }
    }

    /// Inverse of [`tt`](Self::tt); every 4-bit pattern names exactly one gate.
    pub const fn from_tt(tt: u8) -> BaseGate {
        match tt & 0xF {
            0b0000 => BaseGate::Zero,
            0b0001 => BaseGate::Nor,
            0b0010 => BaseGate::AndNa,
            0b0011 => BaseGate::NotA,
            0b0100 => BaseGate::AndNb,
            0b0101 => BaseGate::NotB,
            0b0110 => BaseGate::Xor,
            0b0111 => BaseGate::Nand,
            0b1000 => BaseGate::And,
            0b1001 => BaseGate::Nxor,
            0b1010 => BaseGate::WireB,
            0b1011 => BaseGate::OrNa,
            0b1100 => BaseGate::WireA,
            0b1101 => BaseGate::OrNb,
            0b1110 => BaseGate::Or,
            _ => BaseGate::One,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            BaseGate::And => "AND",
            BaseGate::Or => "OR",
            BaseGate::Nand => "NAND",
            BaseGate::Nor => "NOR",
            BaseGate::AndNa => "ANDNA",
            BaseGate::AndNb => "ANDNB",
            BaseGate::Xor => "XOR",
            BaseGate::Nxor => "NXOR",
            BaseGate::NotA => "NOTA",
            BaseGate::NotB => "NOTB",
            BaseGate::WireA => "WIREA",
            BaseGate::WireB => "WIREB",
            BaseGate::OrNa => "ORNA",
            BaseGate::OrNb => "ORNB",
            BaseGate::Zero => "ZERO",
            BaseGate::One => "ONE",
        }
    }

    /// Case-insensitive lookup by canonical name.
    pub fn parse_name(name: &str) -> Option<BaseGate> {
        let upper = name.trim().to_ascii_uppercase();
        BaseGate::ALL.into_iter().find(|g| g.name() == upper)
    }

    /// Number of inputs the gate actually responds to: 0 for ZERO/ONE,
    /// 1 for NOTA/NOTB/WIREA/WIREB, 2 otherwise. Metadata only; every
    /// gate is evaluated with two operands.
    pub const fn effective_arity(self) -> u8 {
        match self {
            BaseGate::Zero | BaseGate::One => 0,
            BaseGate::NotA | BaseGate::NotB | BaseGate::WireA | BaseGate::WireB => 1,
            _ => 2,
        }
    }

    /// True when the output depends on input A for some value of B.
    pub const fn reads_a(self) -> bool {
        let tt = self.tt();
        (tt & 0b0011) != ((tt >> 2) & 0b0011)
    }

    /// True when the output depends on input B for some value of A.
    pub const fn reads_b(self) -> bool {
        let tt = self.tt();
        let even = tt & 0b0101;
        let odd = (tt >> 1) & 0b0101;
        even != odd
    }
}

impl fmt::Display for BaseGate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Evaluate a single gate on two bits.
pub fn eval_base(g: BaseGate, a: bool, b: bool) -> bool {
    let row = ((a as u8) << 1) | b as u8;
    (g.tt() >> row) & 1 == 1
}

/// A polymorphic gate: one [`BaseGate`] per mode.
///
/// `modes.len() == 1` is permitted so plain traditional circuits can be
/// expressed in the same netlist machinery; validated gate *sets* require
/// at least two modes.
#[derive(Clone, Debug)]
pub struct PolyGate {
    pub modes: Vec<BaseGate>,
    /// Optional display name, ignored by equality and hashing.
    pub label: Option<String>,
}

impl PolyGate {
    pub fn new(modes: Vec<BaseGate>) -> Self {
        assert!(!modes.is_empty(), "a gate needs at least one mode");
        PolyGate { modes, label: None }
    }

    pub fn m(&self) -> usize {
        self.modes.len()
    }

    /// The gate active in `mode` (1-based).
    pub fn gate_in_mode(&self, mode: usize) -> Result<BaseGate, ModeOutOfRange> {
        if mode == 0 || mode > self.modes.len() {
            return Err(ModeOutOfRange { mode, m: self.modes.len() });
        }
        Ok(self.modes[mode - 1])
    }

    /// True when some mode's gate responds to pin A (resp. B). Used for
    /// depth accounting: a pin no mode ever reads carries no signal.
    pub fn reads_a(&self) -> bool {
        self.modes.iter().any(|g| g.reads_a())
    }

    pub fn reads_b(&self) -> bool {
        self.modes.iter().any(|g| g.reads_b())
    }
}

impl PartialEq for PolyGate {
    fn eq(&self, other: &Self) -> bool {
        self.modes == other.modes
    }
}

impl Eq for PolyGate {}

impl PartialOrd for PolyGate {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for PolyGate {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.modes.cmp(&other.modes)
    }
}

impl std::hash::Hash for PolyGate {
    fn hash<H: std::hash::Hasher>(&self, state: &mut H) {
        self.modes.hash(state);
    }
}

impl fmt::Display for PolyGate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if let Some(label) = &self.label {
            return f.write_str(label);
        }
        for (i, g) in self.modes.iter().enumerate() {
            if i > 0 {
                f.write_str("/")?;
            }
            write!(f, "{g}")?;
        }
        Ok(())
    }
}

/// Evaluate a polymorphic gate in a 1-based mode.
pub fn eval_poly(p: &PolyGate, mode: usize, a: bool, b: bool) -> Result<bool, ModeOutOfRange> {
    Ok(eval_base(p.gate_in_mode(mode)?, a, b))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Error)]
#[error("mode {mode} out of range 1..={m}")]
pub struct ModeOutOfRange {
    pub mode: usize,
    pub m: usize,
}

/// A validated collection of polymorphic gates with a shared mode count.
///
/// Validation enforces that for every pair of modes `i < j` some member
/// gate behaves differently in mode i and mode j; otherwise no circuit
/// over the set can ever distinguish the two modes.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PolyGateSet {
    gates: Vec<PolyGate>,
    m: usize,
}

impl PolyGateSet {
    pub fn gates(&self) -> &[PolyGate] {
        &self.gates
    }

    pub fn m(&self) -> usize {
        self.m
    }
}

impl fmt::Display for PolyGateSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, g) in self.gates.iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{g}")?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GateSetError {
    #[error("gate set is empty")]
    EmptySet,
    #[error("gate {gate_index} has {found} modes, expected {expected}")]
    MixedModeCounts {
        gate_index: usize,
        expected: usize,
        found: usize,
    },
    #[error("a polymorphic gate set needs at least 2 modes, got {m}")]
    TooFewModes { m: usize },
    #[error("modes {i} and {j} are indistinguishable: every gate performs the same function in both")]
    IndistinguishableModes { i: usize, j: usize },
}

/// Validate a list of gates against the mode-distinguishability rule.
///
/// On failure reports the first indistinguishable mode pair in
/// lexicographic order.
pub fn validate_gate_set(gates: Vec<PolyGate>) -> Result<PolyGateSet, GateSetError> {
    if gates.is_empty() {
        return Err(GateSetError::EmptySet);
    }
    let m = gates[0].m();
    for (idx, g) in gates.iter().enumerate() {
        if g.m() != m {
            return Err(GateSetError::MixedModeCounts {
                gate_index: idx + 1,
                expected: m,
                found: g.m(),
            });
        }
    }
    if m < 2 {
        return Err(GateSetError::TooFewModes { m });
    }
    for i in 1..=m {
        for j in (i + 1)..=m {
            let distinguished = gates.iter().any(|g| g.modes[i - 1] != g.modes[j - 1]);
            if !distinguished {
                return Err(GateSetError::IndistinguishableModes { i, j });
            }
        }
    }
    Ok(PolyGateSet { gates, m })
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GateSetParseError {
    #[error("gate {gate}, mode {mode}: unknown gate name \"{name}\"")]
    UnknownName {
        gate: usize,
        mode: usize,
        name: String,
    },
    #[error("gate {gate}: empty gate")]
    EmptyGate { gate: usize },
    #[error("empty gate set")]
    Empty,
    #[error(transparent)]
    Invalid(#[from] GateSetError),
}

/// Parse the gate-set grammar: comma-separated poly-gates, each a
/// slash-separated list of gate names, case-insensitive, whitespace
/// around separators ignored. The result is validated.
pub fn parse_gate_set(text: &str) -> Result<PolyGateSet, GateSetParseError> {
    let text = text.trim();
    if text.is_empty() {
        return Err(GateSetParseError::Empty);
    }
    let mut gates = Vec::new();
    for (gi, chunk) in text.split(',').enumerate() {
        let chunk = chunk.trim();
        if chunk.is_empty() {
            return Err(GateSetParseError::EmptyGate { gate: gi + 1 });
        }
        let mut modes = Vec::new();
        for (mi, name) in chunk.split('/').enumerate() {
            match BaseGate::parse_name(name) {
                Some(g) => modes.push(g),
                None => {
                    return Err(GateSetParseError::UnknownName {
                        gate: gi + 1,
                        mode: mi + 1,
                        name: name.trim().to_string(),
                    })
                }
            }
        }
        gates.push(PolyGate::new(modes));
    }
    Ok(validate_gate_set(gates)?)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn truth_tables_are_a_bijection() {
        let mut seen = [false; 16];
        for g in BaseGate::ALL {
            let tt = g.tt();
            assert!(!seen[tt as usize], "{g} duplicates a truth table");
            seen[tt as usize] = true;
            assert_eq!(BaseGate::from_tt(tt), g);
        }
        assert!(seen.iter().all(|&s| s));
    }

    #[test]
    fn eval_matches_definitions() {
        for a in [false, true] {
            for b in [false, true] {
                assert_eq!(eval_base(BaseGate::And, a, b), a & b);
                assert_eq!(eval_base(BaseGate::Or, a, b), a | b);
                assert_eq!(eval_base(BaseGate::Nand, a, b), !(a & b));
                assert_eq!(eval_base(BaseGate::Nor, a, b), !(a | b));
                assert_eq!(eval_base(BaseGate::AndNa, a, b), !a & b);
                assert_eq!(eval_base(BaseGate::AndNb, a, b), a & !b);
                assert_eq!(eval_base(BaseGate::OrNa, a, b), !a | b);
                assert_eq!(eval_base(BaseGate::OrNb, a, b), a | !b);
                assert_eq!(eval_base(BaseGate::Xor, a, b), a ^ b);
                assert_eq!(eval_base(BaseGate::Nxor, a, b), !(a ^ b));
                assert_eq!(eval_base(BaseGate::NotA, a, b), !a);
                assert_eq!(eval_base(BaseGate::NotB, a, b), !b);
                assert_eq!(eval_base(BaseGate::WireA, a, b), a);
                assert_eq!(eval_base(BaseGate::WireB, a, b), b);
                assert_eq!(eval_base(BaseGate::Zero, a, b), false);
                assert_eq!(eval_base(BaseGate::One, a, b), true);
            }
        }
    }

    #[test]
    fn eval_base_examples() {
        assert!(eval_base(BaseGate::And, true, true));
        assert!(!eval_base(BaseGate::Zero, true, false));
        assert!(eval_base(BaseGate::AndNa, false, true));
    }

    // ANDNA(ANDNA(a,1), b) must equal AND(a,b); this identity pins down
    // which of the four and-not/or-not tables carries which name.
    #[test]
    fn andna_anchor_identity() {
        for a in [false, true] {
            for b in [false, true] {
                let inner = eval_base(BaseGate::AndNa, a, true);
                assert_eq!(eval_base(BaseGate::AndNa, inner, b), a & b);
            }
        }
    }

    #[test]
    fn de_morgan_pairs() {
        for a in [false, true] {
            for b in [false, true] {
                assert_eq!(eval_base(BaseGate::Nand, a, b), !eval_base(BaseGate::And, a, b));
                assert_eq!(eval_base(BaseGate::Nor, a, b), !eval_base(BaseGate::Or, a, b));
                assert_eq!(eval_base(BaseGate::Nxor, a, b), !eval_base(BaseGate::Xor, a, b));
            }
        }
    }

    #[test]
    fn effective_arity_table() {
        use BaseGate::*;
        for g in [Zero, One] {
            assert_eq!(g.effective_arity(), 0);
            assert!(!g.reads_a() && !g.reads_b());
        }
        for g in [NotA, NotB, WireA, WireB] {
            assert_eq!(g.effective_arity(), 1);
        }
        assert!(WireA.reads_a() && !WireA.reads_b());
        assert!(NotB.reads_b() && !NotB.reads_a());
        for g in [And, Or, Nand, Nor, AndNa, AndNb, OrNa, OrNb, Xor, Nxor] {
            assert_eq!(g.effective_arity(), 2);
            assert!(g.reads_a() && g.reads_b());
        }
    }

    #[test]
    fn eval_poly_modes() {
        let p = PolyGate::new(vec![BaseGate::And, BaseGate::Or]);
        assert_eq!(eval_poly(&p, 1, true, false).unwrap(), false);
        assert_eq!(eval_poly(&p, 2, true, false).unwrap(), true);
        let nn = PolyGate::new(vec![BaseGate::Nand, BaseGate::Nor]);
        assert_eq!(eval_poly(&nn, 2, false, false).unwrap(), true);
        assert!(eval_poly(&nn, 3, false, false).is_err());
        assert!(eval_poly(&nn, 0, false, false).is_err());
    }

    #[test]
    fn validate_accepts_three_mode_example() {
        let set = parse_gate_set("AND/OR/NOTA, XOR/OR/XOR, NAND/NOTA/OR").unwrap();
        assert_eq!(set.m(), 3);
        assert_eq!(set.gates().len(), 3);
    }

    #[test]
    fn validate_rejects_indistinguishable_modes() {
        let err = parse_gate_set("AND/NAND/AND, NOTA/OR/NOTA").unwrap_err();
        assert_eq!(
            err,
            GateSetParseError::Invalid(GateSetError::IndistinguishableModes { i: 1, j: 3 })
        );
        let err = parse_gate_set("AND/AND").unwrap_err();
        assert_eq!(
            err,
            GateSetParseError::Invalid(GateSetError::IndistinguishableModes { i: 1, j: 2 })
        );
    }

    #[test]
    fn validate_rejects_shape_errors() {
        assert_eq!(validate_gate_set(vec![]).unwrap_err(), GateSetError::EmptySet);
        let err = validate_gate_set(vec![
            PolyGate::new(vec![BaseGate::And, BaseGate::Or]),
            PolyGate::new(vec![BaseGate::And]),
        ])
        .unwrap_err();
        assert!(matches!(err, GateSetError::MixedModeCounts { gate_index: 2, .. }));
        let err = validate_gate_set(vec![PolyGate::new(vec![BaseGate::And])]).unwrap_err();
        assert_eq!(err, GateSetError::TooFewModes { m: 1 });
    }

    // Definition check by brute force: validation accepts exactly the
    // lists where every mode pair is distinguished by some gate.
    #[test]
    fn validate_matches_brute_force_on_single_gate_pairs() {
        for g1 in BaseGate::ALL {
            for g2 in BaseGate::ALL {
                let ok = validate_gate_set(vec![PolyGate::new(vec![g1, g2])]).is_ok();
                assert_eq!(ok, g1 != g2);
            }
        }
    }

    #[test]
    fn parse_is_case_insensitive_and_trims() {
        let set = parse_gate_set("  nand / nor ,  or/andnb ").unwrap();
        assert_eq!(set.to_string(), "NAND/NOR, OR/ANDNB");
        let err = parse_gate_set("NAND/NOTT").unwrap_err();
        assert_eq!(
            err,
            GateSetParseError::UnknownName {
                gate: 1,
                mode: 2,
                name: "NOTT".into()
            }
        );
    }
}
