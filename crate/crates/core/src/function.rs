//! Semantic identity of multi-mode functions.
//!
//! A derived polymorphic gate is identified by what it computes: one truth
//! table per mode. Binary-signature functions pack each mode's 4-row table
//! into 4 bits of a `u64` key, unary-signature functions use 2 bits per
//! mode, so equality and set membership are O(1). This is what makes the
//! closure fixpoints and the oracle cheap enough to run exhaustively.

use std::collections::HashSet;
use std::fmt;

use crate::gate::{BaseGate, PolyGate};

/// Hard packing limit: 4 bits per mode in a u64.
pub const MAX_PACKED_MODES: usize = 16;

/// Truth tables of a two-input circuit, one 4-bit table per mode.
/// Bit `(a << 1) | b` of a mode's table is the output for inputs (a,b).
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct BinaryFunction {
    m: u8,
    key: u64,
}

impl BinaryFunction {
    pub fn from_tables(tables: &[u8]) -> Self {
        assert!(!tables.is_empty() && tables.len() <= MAX_PACKED_MODES);
        let mut key = 0u64;
        for (i, &t) in tables.iter().enumerate() {
            debug_assert!(t <= 0xF);
            key |= u64::from(t & 0xF) << (4 * i);
        }
        BinaryFunction { m: tables.len() as u8, key }
    }

    /// The same 4-bit table in every mode.
    pub fn uniform(tt: u8, m: usize) -> Self {
        BinaryFunction::from_tables(&vec![tt & 0xF; m])
    }

    pub fn uniform_gate(g: BaseGate, m: usize) -> Self {
        BinaryFunction::uniform(g.tt(), m)
    }

    /// Projection onto input a: WIREA in every mode.
    pub fn proj_a(m: usize) -> Self {
        BinaryFunction::uniform_gate(BaseGate::WireA, m)
    }

    pub fn proj_b(m: usize) -> Self {
        BinaryFunction::uniform_gate(BaseGate::WireB, m)
    }

    pub fn constant(value: bool, m: usize) -> Self {
        BinaryFunction::uniform(if value { 0xF } else { 0 }, m)
    }

    pub fn of_poly_gate(p: &PolyGate) -> Self {
        let tables: Vec<u8> = p.modes.iter().map(|g| g.tt()).collect();
        BinaryFunction::from_tables(&tables)
    }

    pub fn m(&self) -> usize {
        self.m as usize
    }

    /// Dense key: an m-digit base-16 number, digit i = mode i+1's table.
    pub fn key(&self) -> u64 {
        self.key
    }

    /// 4-bit table of `mode` (1-based).
    pub fn table(&self, mode: usize) -> u8 {
        debug_assert!(mode >= 1 && mode <= self.m());
        ((self.key >> (4 * (mode - 1))) & 0xF) as u8
    }

    pub fn eval(&self, mode: usize, a: bool, b: bool) -> bool {
        let row = ((a as u8) << 1) | b as u8;
        (self.table(mode) >> row) & 1 == 1
    }

    /// The gate this function acts as in each mode.
    pub fn mode_gates(&self) -> Vec<BaseGate> {
        (1..=self.m()).map(|i| BaseGate::from_tt(self.table(i))).collect()
    }

    pub fn is_uniform(&self, g: BaseGate) -> bool {
        *self == BinaryFunction::uniform_gate(g, self.m())
    }

    /// True when no mode's output depends on input b.
    pub fn ignores_b(&self) -> bool {
        (1..=self.m()).all(|i| {
            let t = self.table(i);
            (t & 1 == (t >> 1) & 1) && ((t >> 2) & 1 == (t >> 3) & 1)
        })
    }

    /// Restriction to a single input, reading the diagonal (a,a).
    pub fn diagonal(&self) -> UnaryFunction {
        let tables: Vec<u8> = (1..=self.m())
            .map(|i| {
                let t = self.table(i);
                (t & 1) | ((t >> 3) & 1) << 1
            })
            .collect();
        UnaryFunction::from_tables(&tables)
    }

    /// Swap the two inputs in every mode.
    pub fn transpose(&self) -> BinaryFunction {
        let tables: Vec<u8> = (1..=self.m())
            .map(|i| {
                let t = self.table(i);
                (t & 0b1001) | ((t & 0b0010) << 1) | ((t & 0b0100) >> 1)
            })
            .collect();
        BinaryFunction::from_tables(&tables)
    }
}

impl fmt::Display for BinaryFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 1..=self.m() {
            if i > 1 {
                f.write_str("/")?;
            }
            write!(f, "{}", BaseGate::from_tt(self.table(i)))?;
        }
        Ok(())
    }
}

impl fmt::Debug for BinaryFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "BinaryFunction({self})")
    }
}

/// What a one-input circuit does in one mode.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum UnaryKind {
    Zero,
    One,
    Wire,
    Not,
}

impl UnaryKind {
    /// 2-bit table: bit v = output on input v.
    pub const fn tt(self) -> u8 {
        match self {
            UnaryKind::Zero => 0b00,
            UnaryKind::One => 0b11,
            UnaryKind::Wire => 0b10,
            UnaryKind::Not => 0b01,
        }
    }

    pub const fn from_tt(tt: u8) -> UnaryKind {
        match tt & 0b11 {
            0b00 => UnaryKind::Zero,
            0b11 => UnaryKind::One,
            0b10 => UnaryKind::Wire,
            _ => UnaryKind::Not,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            UnaryKind::Zero => "ZERO",
            UnaryKind::One => "ONE",
            UnaryKind::Wire => "WIRE",
            UnaryKind::Not => "NOT",
        }
    }
}

impl fmt::Display for UnaryKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Truth tables of a one-input circuit, one 2-bit table per mode.
///
/// NOTA/NOTB collapse to NOT and WIREA/WIREB to WIRE here: a one-input
/// circuit has no pin distinction left to preserve.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct UnaryFunction {
    m: u8,
    key: u64,
}

impl UnaryFunction {
    pub fn from_tables(tables: &[u8]) -> Self {
        assert!(!tables.is_empty() && tables.len() <= MAX_PACKED_MODES);
        let mut key = 0u64;
        for (i, &t) in tables.iter().enumerate() {
            debug_assert!(t <= 0b11);
            key |= u64::from(t & 0b11) << (2 * i);
        }
        UnaryFunction { m: tables.len() as u8, key }
    }

    pub fn uniform(kind: UnaryKind, m: usize) -> Self {
        UnaryFunction::from_tables(&vec![kind.tt(); m])
    }

    pub fn m(&self) -> usize {
        self.m as usize
    }

    pub fn key(&self) -> u64 {
        self.key
    }

    pub fn table(&self, mode: usize) -> u8 {
        debug_assert!(mode >= 1 && mode <= self.m());
        ((self.key >> (2 * (mode - 1))) & 0b11) as u8
    }

    pub fn kind(&self, mode: usize) -> UnaryKind {
        UnaryKind::from_tt(self.table(mode))
    }

    pub fn eval(&self, mode: usize, a: bool) -> bool {
        (self.table(mode) >> (a as u8)) & 1 == 1
    }

    pub fn is_uniform(&self, kind: UnaryKind) -> bool {
        *self == UnaryFunction::uniform(kind, self.m())
    }
}

impl fmt::Display for UnaryFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 1..=self.m() {
            if i > 1 {
                f.write_str("/")?;
            }
            write!(f, "{}", self.kind(i))?;
        }
        Ok(())
    }
}

impl fmt::Debug for UnaryFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "UnaryFunction({self})")
    }
}

/// Semantic identity of a derived polymorphic gate: per-mode truth tables
/// under either the two-input or the one-input signature.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum PolyFunction {
    Binary(BinaryFunction),
    Unary(UnaryFunction),
}

impl PolyFunction {
    pub fn m(&self) -> usize {
        match self {
            PolyFunction::Binary(f) => f.m(),
            PolyFunction::Unary(f) => f.m(),
        }
    }

    pub fn as_binary(&self) -> Option<BinaryFunction> {
        match self {
            PolyFunction::Binary(f) => Some(*f),
            PolyFunction::Unary(_) => None,
        }
    }

    pub fn as_unary(&self) -> Option<UnaryFunction> {
        match self {
            PolyFunction::Unary(f) => Some(*f),
            PolyFunction::Binary(_) => None,
        }
    }
}

impl fmt::Display for PolyFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PolyFunction::Binary(b) => b.fmt(f),
            PolyFunction::Unary(u) => u.fmt(f),
        }
    }
}

/// 4-bit table composition: feed circuits with tables `x` and `y` into a
/// gate with table `g`. Row r of the result reads row (x_r, y_r) of g.
pub(crate) const fn compose_tt(g: u8, x: u8, y: u8) -> u8 {
    let mut out = 0u8;
    let mut row = 0;
    while row < 4 {
        let xr = (x >> row) & 1;
        let yr = (y >> row) & 1;
        out |= ((g >> ((xr << 1) | yr)) & 1) << row;
        row += 1;
    }
    out
}

const fn build_compose_lut() -> [[[u8; 16]; 16]; 16] {
    let mut lut = [[[0u8; 16]; 16]; 16];
    let mut g = 0;
    while g < 16 {
        let mut x = 0;
        while x < 16 {
            let mut y = 0;
            while y < 16 {
                lut[g][x][y] = compose_tt(g as u8, x as u8, y as u8);
                y += 1;
            }
            x += 1;
        }
        g += 1;
    }
    lut
}

static COMPOSE: [[[u8; 16]; 16]; 16] = build_compose_lut();

/// Apply a gate-valued function to two argument functions, mode by mode.
pub fn apply_binary(g: BinaryFunction, x: BinaryFunction, y: BinaryFunction) -> BinaryFunction {
    debug_assert!(g.m == x.m && g.m == y.m);
    let mut key = 0u64;
    for i in 0..g.m() {
        let gt = ((g.key >> (4 * i)) & 0xF) as usize;
        let xt = ((x.key >> (4 * i)) & 0xF) as usize;
        let yt = ((y.key >> (4 * i)) & 0xF) as usize;
        key |= u64::from(COMPOSE[gt][xt][yt]) << (4 * i);
    }
    BinaryFunction { m: g.m, key }
}

/// Chain two one-input functions: `g` after `x`.
pub fn apply_unary(g: UnaryFunction, x: UnaryFunction) -> UnaryFunction {
    debug_assert!(g.m == x.m);
    let mut key = 0u64;
    for i in 0..g.m() {
        let gt = (g.key >> (2 * i)) & 0b11;
        let xt = (x.key >> (2 * i)) & 0b11;
        let out0 = (gt >> (xt & 1)) & 1;
        let out1 = (gt >> ((xt >> 1) & 1)) & 1;
        key |= (out0 | (out1 << 1)) << (2 * i);
    }
    UnaryFunction { m: g.m, key }
}

/// Membership set over packed function keys. Dense bitmap while the key
/// space fits in memory, hash set beyond that (large mode counts only
/// reachable through the env override).
pub(crate) enum KeySet {
    Dense { bits: Vec<u64>, len: usize },
    Sparse(HashSet<u64>),
}

impl KeySet {
    const DENSE_LIMIT: u64 = 1 << 24;

    pub fn for_space(space: u64) -> KeySet {
        if space <= Self::DENSE_LIMIT {
            KeySet::Dense {
                bits: vec![0u64; ((space + 63) / 64) as usize],
                len: 0,
            }
        } else {
            KeySet::Sparse(HashSet::new())
        }
    }

    pub fn binary_space(m: usize) -> KeySet {
        KeySet::for_space(if m >= 6 { u64::MAX } else { 1u64 << (4 * m) })
    }

    pub fn unary_space(m: usize) -> KeySet {
        KeySet::for_space(if m >= 12 { u64::MAX } else { 1u64 << (2 * m) })
    }

    /// Insert, returning true when the key was new.
    pub fn insert(&mut self, key: u64) -> bool {
        match self {
            KeySet::Dense { bits, len } => {
                let word = (key / 64) as usize;
                let mask = 1u64 << (key % 64);
                if bits[word] & mask != 0 {
                    false
                } else {
                    bits[word] |= mask;
                    *len += 1;
                    true
                }
            }
            KeySet::Sparse(set) => set.insert(key),
        }
    }

    pub fn contains(&self, key: u64) -> bool {
        match self {
            KeySet::Dense { bits, .. } => {
                bits[(key / 64) as usize] & (1u64 << (key % 64)) != 0
            }
            KeySet::Sparse(set) => set.contains(&key),
        }
    }

    pub fn len(&self) -> usize {
        match self {
            KeySet::Dense { len, .. } => *len,
            KeySet::Sparse(set) => set.len(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gate::eval_base;

    #[test]
    fn compose_matches_pointwise_eval() {
        for g in BaseGate::ALL {
            for x in BaseGate::ALL {
                for y in BaseGate::ALL {
                    let composed = compose_tt(g.tt(), x.tt(), y.tt());
                    for a in [false, true] {
                        for b in [false, true] {
                            let want = eval_base(g, eval_base(x, a, b), eval_base(y, a, b));
                            let row = ((a as u8) << 1) | b as u8;
                            assert_eq!((composed >> row) & 1 == 1, want);
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn binary_function_round_trips_tables() {
        let f = BinaryFunction::from_tables(&[BaseGate::And.tt(), BaseGate::Or.tt()]);
        assert_eq!(f.m(), 2);
        assert_eq!(f.table(1), BaseGate::And.tt());
        assert_eq!(f.table(2), BaseGate::Or.tt());
        assert_eq!(f.to_string(), "AND/OR");
        assert_eq!(f.mode_gates(), vec![BaseGate::And, BaseGate::Or]);
    }

    #[test]
    fn apply_binary_modewise() {
        let nand_nor = BinaryFunction::from_tables(&[BaseGate::Nand.tt(), BaseGate::Nor.tt()]);
        let a = BinaryFunction::proj_a(2);
        let b = BinaryFunction::proj_b(2);
        let inner = apply_binary(nand_nor, a, b);
        let outer = apply_binary(nand_nor, inner, inner);
        // NAND(NAND(a,b), NAND(a,b)) = AND; NOR(NOR(a,b), NOR(a,b)) = OR.
        assert_eq!(outer.to_string(), "AND/OR");
    }

    #[test]
    fn diagonal_and_ignores_b() {
        let not_cell = BinaryFunction::from_tables(&[BaseGate::NotA.tt(), BaseGate::NotA.tt()]);
        assert!(not_cell.ignores_b());
        let u = not_cell.diagonal();
        assert!(u.is_uniform(UnaryKind::Not));
        assert_eq!(u.to_string(), "NOT/NOT");
        let mixed = BinaryFunction::from_tables(&[BaseGate::NotA.tt(), BaseGate::Xor.tt()]);
        assert!(!mixed.ignores_b());
    }

    #[test]
    fn unary_chain() {
        let not2 = UnaryFunction::uniform(UnaryKind::Not, 2);
        let wire = apply_unary(not2, not2);
        assert!(wire.is_uniform(UnaryKind::Wire));
        let zero_one = UnaryFunction::from_tables(&[UnaryKind::Zero.tt(), UnaryKind::One.tt()]);
        let chained = apply_unary(not2, zero_one);
        assert_eq!(chained.kind(1), UnaryKind::One);
        assert_eq!(chained.kind(2), UnaryKind::Zero);
    }

    #[test]
    fn transpose_swaps_inputs() {
        let f = BinaryFunction::from_tables(&[BaseGate::AndNa.tt(), BaseGate::WireA.tt()]);
        let t = f.transpose();
        assert_eq!(t.mode_gates(), vec![BaseGate::AndNb, BaseGate::WireB]);
        assert_eq!(t.transpose(), f);
    }

    #[test]
    fn key_set_dense_and_sparse() {
        let mut dense = KeySet::binary_space(2);
        assert!(dense.insert(17));
        assert!(!dense.insert(17));
        assert!(dense.contains(17));
        assert!(!dense.contains(16));
        assert_eq!(dense.len(), 1);
        let mut sparse = KeySet::for_space(u64::MAX);
        assert!(matches!(sparse, KeySet::Sparse(_)));
        assert!(sparse.insert(1 << 60));
        assert!(!sparse.insert(1 << 60));
    }
}
