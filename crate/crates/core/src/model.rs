//! Boolean classifiers as explicit truth tables, plus the instance/problem
//! types everything else operates on.
//!
//! Encoding convention, used everywhere in this crate: a point over features
//! `1..=m` is the table index whose bit `j-1` is the value of feature `j`
//! (feature 1 is the least significant bit). So for m = 3 the table entry at
//! index 3 = 0b011 is the prediction at (x1, x2, x3) = (1, 1, 0).

use crate::bits::Bits;
use crate::error::{Error, Result};

/// Hard cap on arity; a table has 2^m entries and everything downstream is
/// O(2^m) memory, so this bounds worst-case footprints to tens of MB.
pub const MAX_ARITY: u8 = 24;

fn check_arity(m: u32) -> Result<u8> {
    if m == 0 {
        return Err(Error::Range("arity must be at least 1".into()));
    }
    if m > MAX_ARITY as u32 {
        return Err(Error::Capacity { requested: m, cap: MAX_ARITY });
    }
    Ok(m as u8)
}

/// A total Boolean function given by its 2^m-entry truth table.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct BooleanFunction {
    arity: u8,
    table: Bits,
}

impl BooleanFunction {
    /// Build from a predicate on point indices.
    pub fn from_fn(m: u8, mut f: impl FnMut(u32) -> bool) -> Result<Self> {
        let m = check_arity(m as u32)?;
        let table = Bits::from_fn(1 << m, |i| f(i as u32));
        Ok(BooleanFunction { arity: m, table })
    }

    /// Build from a slice of table entries, index 0 first. The slice length
    /// must be a power of two with exponent 1..=24.
    pub fn from_table(entries: &[bool]) -> Result<Self> {
        if !entries.len().is_power_of_two() || entries.len() < 2 {
            return Err(Error::Range(format!(
                "table length {} is not a power of two >= 2",
                entries.len()
            )));
        }
        let m = check_arity(entries.len().trailing_zeros())?;
        Ok(BooleanFunction { arity: m, table: Bits::from_fn(entries.len(), |i| entries[i]) })
    }

    pub fn constant(m: u8, value: bool) -> Result<Self> {
        Self::from_fn(m, |_| value)
    }

    fn from_bits(arity: u8, table: Bits) -> Self {
        debug_assert_eq!(table.len(), 1 << arity);
        BooleanFunction { arity, table }
    }

    #[inline]
    pub fn arity(&self) -> u8 {
        self.arity
    }

    #[inline]
    pub fn table_len(&self) -> usize {
        1 << self.arity
    }

    /// Prediction at a point given as a table index (bit j-1 = feature j).
    #[inline]
    pub fn eval_index(&self, idx: u32) -> bool {
        self.table.get(idx as usize)
    }

    /// Prediction at a point; the point's arity must match.
    pub fn evaluate(&self, point: &Point) -> Result<bool> {
        if point.arity() != self.arity {
            return Err(Error::Dimension { expected: self.arity, got: point.arity() });
        }
        Ok(self.eval_index(point.index()))
    }

    pub fn ones_count(&self) -> u64 {
        self.table.count_ones()
    }

    pub fn is_constant(&self) -> bool {
        let ones = self.ones_count();
        ones == 0 || ones == self.table_len() as u64
    }

    /// True if every point mapped to 1 by self is mapped to 1 by `other`.
    pub fn implies(&self, other: &BooleanFunction) -> Result<bool> {
        if self.arity != other.arity {
            return Err(Error::Dimension { expected: self.arity, got: other.arity });
        }
        Ok(self.table.implies(&other.table))
    }

    /// The (m+1)-ary function selecting on a new top feature:
    /// f0 where the new feature is 0, f1 where it is 1.
    pub fn gate(f0: &BooleanFunction, f1: &BooleanFunction) -> Result<BooleanFunction> {
        if f0.arity != f1.arity {
            return Err(Error::Dimension { expected: f0.arity, got: f1.arity });
        }
        let m = check_arity(f0.arity as u32 + 1)?;
        Ok(BooleanFunction::from_bits(m, f0.table.concat(&f1.table)))
    }

    /// The (m+offset)-ary function applying self to features
    /// offset+1..=offset+m and ignoring the new low features 1..=offset.
    pub fn shift_vars(&self, offset: u8) -> Result<BooleanFunction> {
        let m = check_arity(self.arity as u32 + offset as u32)?;
        let mask = (self.table_len() - 1) as u32;
        BooleanFunction::from_fn(m, |i| self.eval_index((i >> offset) & mask))
    }

    /// Entrywise combination of two functions of equal arity.
    pub fn pointwise(op: BitOp, f: &BooleanFunction, g: &BooleanFunction) -> Result<BooleanFunction> {
        if f.arity != g.arity {
            return Err(Error::Dimension { expected: f.arity, got: g.arity });
        }
        let table = match op {
            BitOp::And => f.table.and(&g.table),
            BitOp::Or => f.table.or(&g.table),
        };
        Ok(BooleanFunction::from_bits(f.arity, table))
    }

    /// Table rendered as '0'/'1' characters, index 0 first.
    pub fn table_string(&self) -> String {
        (0..self.table_len()).map(|i| if self.table.get(i) { '1' } else { '0' }).collect()
    }
}

impl std::fmt::Debug for BooleanFunction {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "BooleanFunction(m={}, {:?})", self.arity, self.table)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BitOp {
    And,
    Or,
}

/// A point of the feature space, stored as its table index.
#[derive(Clone, Copy, PartialEq, Eq, Hash)]
pub struct Point {
    bits: u32,
    arity: u8,
}

impl Point {
    pub fn from_index(m: u8, idx: u32) -> Result<Self> {
        let m = check_arity(m as u32)?;
        if idx >= 1 << m {
            return Err(Error::Range(format!("point index {idx} out of range for arity {m}")));
        }
        Ok(Point { bits: idx, arity: m })
    }

    pub fn from_values(values: &[bool]) -> Result<Self> {
        let m = check_arity(values.len() as u32)?;
        let mut bits = 0;
        for (j, &v) in values.iter().enumerate() {
            bits |= (v as u32) << j;
        }
        Ok(Point { bits, arity: m })
    }

    /// Parse "011..." with feature 1 leftmost.
    pub fn parse(s: &str) -> Result<Self> {
        if s.is_empty() || s.len() > MAX_ARITY as usize {
            return Err(Error::Range(format!(
                "point must have 1..={MAX_ARITY} features, got {}",
                s.len()
            )));
        }
        let mut bits = 0;
        for (j, c) in s.chars().enumerate() {
            match c {
                '0' => {}
                '1' => bits |= 1 << j,
                _ => {
                    return Err(Error::Parse {
                        line: 1,
                        col: j + 1,
                        msg: format!("expected '0' or '1', found {c:?}"),
                    })
                }
            }
        }
        Ok(Point { bits, arity: s.len() as u8 })
    }

    pub fn all_zeros(m: u8) -> Result<Self> {
        Point::from_index(m, 0)
    }

    pub fn all_ones(m: u8) -> Result<Self> {
        let m = check_arity(m as u32)?;
        Ok(Point { bits: (1u32 << m) - 1, arity: m })
    }

    #[inline]
    pub fn index(&self) -> u32 {
        self.bits
    }

    #[inline]
    pub fn arity(&self) -> u8 {
        self.arity
    }

    /// Value of feature j (1-based).
    pub fn get(&self, feature: u8) -> Result<bool> {
        if feature == 0 || feature > self.arity {
            return Err(Error::Feature { feature, arity: self.arity });
        }
        Ok(self.bits >> (feature - 1) & 1 == 1)
    }

    /// The point extended with one more feature holding `value`.
    pub fn appended(&self, value: bool) -> Result<Self> {
        let m = check_arity(self.arity as u32 + 1)?;
        Ok(Point { bits: self.bits | (value as u32) << self.arity, arity: m })
    }

    /// Concatenation: self on features 1..=m1, other on m1+1..=m1+m2.
    pub fn concat(&self, other: &Point) -> Result<Self> {
        let m = check_arity(self.arity as u32 + other.arity as u32)?;
        Ok(Point { bits: self.bits | other.bits << self.arity, arity: m })
    }

    pub fn flipped(&self, feature: u8) -> Result<Self> {
        if feature == 0 || feature > self.arity {
            return Err(Error::Feature { feature, arity: self.arity });
        }
        Ok(Point { bits: self.bits ^ 1 << (feature - 1), arity: self.arity })
    }

    /// Rank in lexicographic order of the value tuple (v1 compared first).
    /// Note this differs from the table index, which weights feature 1 least.
    pub fn lex_rank(&self) -> u32 {
        let mut r = 0;
        for j in 0..self.arity {
            r |= (self.bits >> j & 1) << (self.arity - 1 - j);
        }
        r
    }

    pub fn hamming_distance(&self, other: &Point) -> u32 {
        (self.bits ^ other.bits).count_ones()
    }
}

impl std::fmt::Display for Point {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        for j in 0..self.arity {
            write!(f, "{}", self.bits >> j & 1)?;
        }
        Ok(())
    }
}

impl std::fmt::Debug for Point {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "Point({self})")
    }
}

/// A classified point: the pair (v, c) an explanation is about.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Instance {
    pub point: Point,
    pub class: bool,
}

/// A function together with an instance whose stated class matches the
/// function's prediction (checked at construction).
#[derive(Debug, Clone)]
pub struct ExplanationProblem {
    function: BooleanFunction,
    instance: Instance,
}

impl ExplanationProblem {
    pub fn new(function: BooleanFunction, instance: Instance) -> Result<Self> {
        let actual = function.evaluate(&instance.point)?;
        if actual != instance.class {
            return Err(Error::ClassMismatch { stated: instance.class, actual });
        }
        Ok(ExplanationProblem { function, instance })
    }

    /// Convenience: classify the point with the function itself.
    pub fn at_point(function: BooleanFunction, point: Point) -> Result<Self> {
        let class = function.evaluate(&point)?;
        Ok(ExplanationProblem { function, instance: Instance { point, class } })
    }

    #[inline]
    pub fn function(&self) -> &BooleanFunction {
        &self.function
    }

    #[inline]
    pub fn instance(&self) -> &Instance {
        &self.instance
    }

    #[inline]
    pub fn arity(&self) -> u8 {
        self.function.arity()
    }

    #[inline]
    pub fn v_index(&self) -> u32 {
        self.instance.point.index()
    }

    #[inline]
    pub fn class(&self) -> bool {
        self.instance.class
    }
}

/// A subset of the features 1..=m, encoded as a mask with bit j-1 for
/// feature j. Orderings on FeatureSet compare the mask value.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct FeatureSet {
    mask: u32,
}

impl FeatureSet {
    pub const EMPTY: FeatureSet = FeatureSet { mask: 0 };

    pub fn from_mask(mask: u32) -> Self {
        FeatureSet { mask }
    }

    pub fn full(m: u8) -> Self {
        debug_assert!(m <= MAX_ARITY);
        FeatureSet { mask: (1u32 << m) - 1 }
    }

    pub fn from_features(features: &[u8]) -> Result<Self> {
        let mut mask = 0;
        for &f in features {
            if f == 0 || f > MAX_ARITY {
                return Err(Error::Feature { feature: f, arity: MAX_ARITY });
            }
            mask |= 1 << (f - 1);
        }
        Ok(FeatureSet { mask })
    }

    #[inline]
    pub fn mask(&self) -> u32 {
        self.mask
    }

    #[inline]
    pub fn len(&self) -> u32 {
        self.mask.count_ones()
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        self.mask == 0
    }

    #[inline]
    pub fn contains(&self, feature: u8) -> bool {
        (1..=32).contains(&feature) && self.mask >> (feature - 1) & 1 == 1
    }

    pub fn with(&self, feature: u8) -> Self {
        debug_assert!((1..=MAX_ARITY).contains(&feature));
        FeatureSet { mask: self.mask | 1 << (feature - 1) }
    }

    pub fn without(&self, feature: u8) -> Self {
        debug_assert!((1..=MAX_ARITY).contains(&feature));
        FeatureSet { mask: self.mask & !(1 << (feature - 1)) }
    }

    pub fn is_subset_of(&self, other: &FeatureSet) -> bool {
        self.mask & !other.mask == 0
    }

    pub fn union(&self, other: &FeatureSet) -> Self {
        FeatureSet { mask: self.mask | other.mask }
    }

    /// Features in ascending order, 1-based.
    pub fn iter(&self) -> impl Iterator<Item = u8> {
        let mut mask = self.mask;
        std::iter::from_fn(move || {
            if mask == 0 {
                return None;
            }
            let j = mask.trailing_zeros();
            mask &= mask - 1;
            Some(j as u8 + 1)
        })
    }
}

impl std::fmt::Display for FeatureSet {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{{")?;
        for (k, j) in self.iter().enumerate() {
            if k > 0 {
                write!(f, ",")?;
            }
            write!(f, "{j}")?;
        }
        write!(f, "}}")
    }
}

// ---------------------------------------------------------------------------
// .btt text format
//
//   # optional comment lines
//   <m>
//   <2^m chars of 0/1, index 0 first>     -- or --
//   x<2^m/4 hex digits>
//
// In the hex form the table is packed into bytes (bit 8j is the low bit of
// byte j) and each byte prints with its high nibble first; bytes appear in
// index order. Hex input needs m >= 3 so the table fills whole bytes.
// ---------------------------------------------------------------------------

/// Binary serializations stay this readable; larger tables switch to hex.
const HEX_THRESHOLD: u8 = 12;

pub fn parse_function(text: &str) -> Result<BooleanFunction> {
    let mut content = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.strip_suffix('\r').unwrap_or(l)))
        .filter(|(_, l)| !l.trim().is_empty() && !l.starts_with('#'));
    let last_line = text.lines().count();

    let (hline, header) = content.next().ok_or(Error::Parse {
        line: last_line.max(1),
        col: 1,
        msg: "missing arity header".into(),
    })?;
    let m: u32 = header.trim().parse().map_err(|_| Error::Parse {
        line: hline,
        col: 1,
        msg: format!("expected a decimal arity, found {:?}", header.trim()),
    })?;
    if m == 0 {
        return Err(Error::Parse { line: hline, col: 1, msg: "arity must be at least 1".into() });
    }
    let m = check_arity(m)?; // m > 24 is a capacity error, not a parse error

    let (tline, row) = content.next().ok_or(Error::Parse {
        line: last_line.max(1),
        col: 1,
        msg: "missing table line".into(),
    })?;
    let table = if let Some(hex) = row.strip_prefix('x') {
        parse_hex_row(m, tline, hex)?
    } else {
        parse_bit_row(m, tline, row)?
    };

    if let Some((line, _)) = content.next() {
        return Err(Error::Parse { line, col: 1, msg: "unexpected content after table".into() });
    }
    Ok(BooleanFunction::from_bits(m, table))
}

fn parse_bit_row(m: u8, line: usize, row: &str) -> Result<Bits> {
    let expected = 1usize << m;
    let mut table = Bits::zeros(expected);
    let mut count = 0;
    for (j, c) in row.chars().enumerate() {
        if j >= expected {
            return Err(Error::Parse {
                line,
                col: expected + 1,
                msg: format!("expected {expected} table bits, found more"),
            });
        }
        match c {
            '0' => {}
            '1' => table.set(j, true),
            _ => {
                return Err(Error::Parse {
                    line,
                    col: j + 1,
                    msg: format!("expected '0' or '1', found {c:?}"),
                })
            }
        }
        count += 1;
    }
    if count != expected {
        return Err(Error::Parse {
            line,
            col: count + 1,
            msg: format!("expected {expected} table bits, found {count}"),
        });
    }
    Ok(table)
}

fn parse_hex_row(m: u8, line: usize, hex: &str) -> Result<Bits> {
    if m < 3 {
        return Err(Error::Parse {
            line,
            col: 1,
            msg: "hex table form needs arity >= 3 (whole bytes)".into(),
        });
    }
    let expected = 1usize << (m - 2);
    let mut digits = Vec::with_capacity(expected);
    for (j, c) in hex.chars().enumerate() {
        if j >= expected {
            return Err(Error::Parse {
                line,
                col: expected + 2,
                msg: format!("expected {expected} hex digits, found more"),
            });
        }
        let d = c.to_digit(16).ok_or(Error::Parse {
            line,
            col: j + 2, // +1 for the 'x' prefix
            msg: format!("expected a hex digit, found {c:?}"),
        })?;
        digits.push(d as u8);
    }
    if digits.len() != expected {
        return Err(Error::Parse {
            line,
            col: digits.len() + 2,
            msg: format!("expected {expected} hex digits, found {}", digits.len()),
        });
    }
    let mut table = Bits::zeros(1 << m);
    for (byte_idx, pair) in digits.chunks(2).enumerate() {
        let byte = pair[0] << 4 | pair[1];
        for t in 0..8 {
            if byte >> t & 1 == 1 {
                table.set(8 * byte_idx + t, true);
            }
        }
    }
    Ok(table)
}

/// Render in the `.btt` format; binary bit-string up to m = 12, hex above.
pub fn serialize_function(f: &BooleanFunction) -> String {
    if f.arity() <= HEX_THRESHOLD {
        format!("{}\n{}\n", f.arity(), f.table_string())
    } else {
        serialize_function_hex(f).expect("arity above threshold is above 3")
    }
}

/// Hex `.btt` form; requires m >= 3 so the table packs whole bytes.
pub fn serialize_function_hex(f: &BooleanFunction) -> Result<String> {
    if f.arity() < 3 {
        return Err(Error::Range("hex table form needs arity >= 3".into()));
    }
    let mut out = format!("{}\nx", f.arity());
    for byte_idx in 0..f.table_len() / 8 {
        let mut byte = 0u8;
        for t in 0..8 {
            byte |= (f.eval_index((8 * byte_idx + t) as u32) as u8) << t;
        }
        out.push_str(&format!("{byte:02x}"));
    }
    out.push('\n');
    Ok(out)
}
