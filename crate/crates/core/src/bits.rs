//! Packed bit vector sized for truth tables (length a power of two, up to 2^24).
//!
//! Bit `i` of the vector lives at bit `i % 64` of word `i / 64`, so the whole
//! vector reads as one little-endian integer. Bits past `len` are kept zero.

const WORD_BITS: usize = 64;

#[derive(Clone, PartialEq, Eq, Hash)]
pub(crate) struct Bits {
    words: Vec<u64>,
    len: usize,
}

impl Bits {
    pub fn zeros(len: usize) -> Self {
        let nwords = len.div_ceil(WORD_BITS).max(1);
        Bits { words: vec![0; nwords], len }
    }

    pub fn from_fn(len: usize, mut f: impl FnMut(usize) -> bool) -> Self {
        let mut b = Bits::zeros(len);
        for i in 0..len {
            if f(i) {
                b.words[i / WORD_BITS] |= 1 << (i % WORD_BITS);
            }
        }
        b
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.len
    }

    #[inline]
    pub fn get(&self, i: usize) -> bool {
        debug_assert!(i < self.len);
        self.words[i / WORD_BITS] >> (i % WORD_BITS) & 1 == 1
    }

    #[inline]
    pub fn set(&mut self, i: usize, value: bool) {
        debug_assert!(i < self.len);
        if value {
            self.words[i / WORD_BITS] |= 1 << (i % WORD_BITS);
        } else {
            self.words[i / WORD_BITS] &= !(1 << (i % WORD_BITS));
        }
    }

    pub fn count_ones(&self) -> u64 {
        self.words.iter().map(|w| u64::from(w.count_ones())).sum()
    }

    /// self & !other == 0, i.e. every set bit of self is set in other.
    pub fn implies(&self, other: &Bits) -> bool {
        debug_assert_eq!(self.len, other.len);
        self.words.iter().zip(&other.words).all(|(a, b)| a & !b == 0)
    }

    pub fn and(&self, other: &Bits) -> Bits {
        debug_assert_eq!(self.len, other.len);
        let words = self.words.iter().zip(&other.words).map(|(a, b)| a & b).collect();
        Bits { words, len: self.len }
    }

    pub fn or(&self, other: &Bits) -> Bits {
        debug_assert_eq!(self.len, other.len);
        let words = self.words.iter().zip(&other.words).map(|(a, b)| a | b).collect();
        Bits { words, len: self.len }
    }

    /// In-place downward AND over the subset lattice: afterwards entry `y`
    /// is the AND of the original entries over all submasks of `y`.
    /// Requires `len` to be a power of two.
    pub fn fold_and_subsets(&mut self) {
        debug_assert!(self.len.is_power_of_two() || self.len == 1);
        let n = self.len.trailing_zeros() as usize;
        // Masks selecting positions whose i-th index bit is 1, for in-word strides.
        const SEL: [u64; 6] = [
            0xAAAA_AAAA_AAAA_AAAA,
            0xCCCC_CCCC_CCCC_CCCC,
            0xF0F0_F0F0_F0F0_F0F0,
            0xFF00_FF00_FF00_FF00,
            0xFFFF_0000_FFFF_0000,
            0xFFFF_FFFF_0000_0000,
        ];
        for (i, sel) in SEL.iter().enumerate().take(n) {
            let stride = 1 << i;
            for w in &mut self.words {
                // positions with index bit i set get ANDed with their lower half
                *w &= (*w << stride) | !sel;
            }
        }
        for i in 6..n {
            let block = 1 << (i - 6); // stride in words
            let mut base = 0;
            while base < self.words.len() {
                for j in 0..block {
                    self.words[base + block + j] &= self.words[base + j];
                }
                base += 2 * block;
            }
        }
    }

    /// Concatenation: self provides entries `0..len`, other the rest.
    pub fn concat(&self, other: &Bits) -> Bits {
        if self.len.is_multiple_of(WORD_BITS) {
            let mut words = self.words.clone();
            words.extend_from_slice(&other.words);
            return Bits { words, len: self.len + other.len };
        }
        Bits::from_fn(self.len + other.len, |i| {
            if i < self.len { self.get(i) } else { other.get(i - self.len) }
        })
    }

    /// Bit-reversed copy: entry `i` of the result is entry `len-1-i` of self.
    /// For a table indexed by feature masks this maps every mask to its
    /// complement. Requires `len` to be a power of two.
    pub fn reversed(&self) -> Bits {
        debug_assert!(self.len.is_power_of_two() || self.len == 1);
        if self.len < WORD_BITS {
            let w = self.words[0].reverse_bits() >> (WORD_BITS - self.len);
            return Bits { words: vec![w], len: self.len };
        }
        let words = self.words.iter().rev().map(|w| w.reverse_bits()).collect();
        Bits { words, len: self.len }
    }
}

impl std::fmt::Debug for Bits {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let shown = self.len.min(64);
        for i in 0..shown {
            write!(f, "{}", u8::from(self.get(i)))?;
        }
        if self.len > shown {
            write!(f, "... ({} bits)", self.len)?;
        }
        Ok(())
    }
}
