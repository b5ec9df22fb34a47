//! Static-model integer arithmetic coder (Witten, Neal and Cleary layout,
//! 32-bit registers, frequency totals of 2^20).

use super::CodecError;

const PRECISION: u32 = 32;
const FULL: u64 = (1 << PRECISION) - 1;
const HALF: u64 = 1 << (PRECISION - 1);
const QUARTER: u64 = 1 << (PRECISION - 2);

/// log2 of the frequency total of every table.
pub const FREQUENCY_BITS: u32 = 20;
const TOTAL: u64 = 1 << FREQUENCY_BITS;

/// Bits packed most significant first, with an explicit length.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct BitString {
    bytes: Vec<u8>,
    len: u64,
}

impl BitString {
    pub fn new() -> Self {
        Self::default()
    }

    /// `bytes` must hold at least `len` bits; extra bits are cleared.
    pub fn from_bytes(mut bytes: Vec<u8>, len: u64) -> Option<Self> {
        let needed = len.div_ceil(8) as usize;
        if bytes.len() != needed {
            return None;
        }
        if !len.is_multiple_of(8) {
            let last = bytes.last_mut().expect("len > 0");
            *last &= 0xFFu8 << (8 - len % 8);
        }
        Some(Self { bytes, len })
    }

    pub fn push(&mut self, bit: bool) {
        if self.len.is_multiple_of(8) {
            self.bytes.push(0);
        }
        if bit {
            *self.bytes.last_mut().expect("just pushed") |= 0x80 >> (self.len % 8);
        }
        self.len += 1;
    }

    /// Bit `i`, or `false` past the end.
    pub fn get(&self, i: u64) -> bool {
        i < self.len && (self.bytes[(i / 8) as usize] >> (7 - i % 8)) & 1 == 1
    }

    pub fn len(&self) -> u64 {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn as_bytes(&self) -> &[u8] {
        &self.bytes
    }

    /// Flips bit `i`. Test helper for corruption checks.
    pub fn flip(&mut self, i: u64) {
        assert!(i < self.len);
        self.bytes[(i / 8) as usize] ^= 0x80 >> (i % 8);
    }
}

/// Cumulative frequencies of one quantized distribution. Every symbol with
/// positive probability gets frequency at least 1; zero-probability symbols
/// get 0 and cannot be coded.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FrequencyTable {
    cum: Vec<u64>,
}

impl FrequencyTable {
    /// Returns `None` when no entry is positive or the alphabet is too large.
    pub fn new(probs: &[f64]) -> Option<Self> {
        let positive = probs.iter().filter(|&&p| p > 0.0).count() as u64;
        if positive == 0 || positive > TOTAL {
            return None;
        }
        let sum: f64 = probs.iter().filter(|p| **p > 0.0).sum();
        let mut freq: Vec<u64> = probs
            .iter()
            .map(|&p| if p > 0.0 { ((p / sum * TOTAL as f64).round() as u64).max(1) } else { 0 })
            .collect();
        loop {
            let total: u64 = freq.iter().sum();
            if total == TOTAL {
                break;
            }
            // Largest entry first, lowest index on ties.
            let (k, _) = freq
                .iter()
                .enumerate()
                .fold((0, 0), |best, (k, &f)| if f > best.1 { (k, f) } else { best });
            if total < TOTAL {
                freq[k] += TOTAL - total;
            } else {
                freq[k] -= (total - TOTAL).min(freq[k] - 1);
            }
        }
        let mut cum = Vec::with_capacity(freq.len() + 1);
        cum.push(0);
        for f in freq {
            cum.push(cum.last().unwrap() + f);
        }
        Some(Self { cum })
    }

    pub fn alphabet_size(&self) -> usize {
        self.cum.len() - 1
    }

    pub fn frequency(&self, symbol: usize) -> u64 {
        self.cum[symbol + 1] - self.cum[symbol]
    }

    /// Self-information of the quantized model, in bits.
    pub fn cost(&self, symbol: usize) -> f64 {
        (TOTAL as f64 / self.frequency(symbol) as f64).log2()
    }
}

/// One frequency table per context. Contexts of probability zero have no
/// table.
#[derive(Debug, Clone, PartialEq)]
pub struct ConditionalModel {
    tables: Vec<Option<FrequencyTable>>,
}

impl ConditionalModel {
    /// `rows[c]` is the (possibly unnormalized) distribution in context `c`.
    pub fn new(rows: &[Vec<f64>]) -> Self {
        Self {
            tables: rows.iter().map(|r| FrequencyTable::new(r)).collect(),
        }
    }

    /// A model with a single context.
    pub fn unconditional(probs: &[f64]) -> Self {
        Self::new(&[probs.to_vec()])
    }

    fn table(&self, context: usize) -> Option<&FrequencyTable> {
        self.tables.get(context).and_then(Option::as_ref)
    }
}

struct Encoder {
    low: u64,
    high: u64,
    pending: u64,
    out: BitString,
}

impl Encoder {
    fn new() -> Self {
        Self {
            low: 0,
            high: FULL,
            pending: 0,
            out: BitString::new(),
        }
    }

    fn emit(&mut self, bit: bool) {
        self.out.push(bit);
        for _ in 0..self.pending {
            self.out.push(!bit);
        }
        self.pending = 0;
    }

    fn encode(&mut self, table: &FrequencyTable, symbol: usize) {
        let range = self.high - self.low + 1;
        self.high = self.low + range * table.cum[symbol + 1] / TOTAL - 1;
        self.low += range * table.cum[symbol] / TOTAL;
        loop {
            if self.high < HALF {
                self.emit(false);
            } else if self.low >= HALF {
                self.emit(true);
                self.low -= HALF;
                self.high -= HALF;
            } else if self.low >= QUARTER && self.high < 3 * QUARTER {
                self.pending += 1;
                self.low -= QUARTER;
                self.high -= QUARTER;
            } else {
                break;
            }
            self.low <<= 1;
            self.high = (self.high << 1) | 1;
        }
    }

    fn finish(mut self) -> BitString {
        // Nothing but certain symbols: the decoder needs no bits at all.
        if self.out.is_empty() && self.pending == 0 && self.low == 0 && self.high == FULL {
            return self.out;
        }
        self.pending += 1;
        let bit = self.low >= QUARTER;
        self.emit(bit);
        self.out
    }
}

struct Decoder<'a> {
    low: u64,
    high: u64,
    value: u64,
    pos: u64,
    bits: &'a BitString,
}

impl<'a> Decoder<'a> {
    fn new(bits: &'a BitString) -> Self {
        let mut d = Self {
            low: 0,
            high: FULL,
            value: 0,
            pos: 0,
            bits,
        };
        for _ in 0..PRECISION {
            d.value = (d.value << 1) | d.next_bit();
        }
        d
    }

    fn next_bit(&mut self) -> u64 {
        let b = self.bits.get(self.pos);
        self.pos += 1;
        u64::from(b)
    }

    fn decode(&mut self, table: &FrequencyTable) -> usize {
        let range = self.high - self.low + 1;
        let scaled = ((self.value - self.low + 1) * TOTAL - 1) / range;
        let symbol = table.cum.partition_point(|&c| c <= scaled) - 1;
        self.high = self.low + range * table.cum[symbol + 1] / TOTAL - 1;
        self.low += range * table.cum[symbol] / TOTAL;
        loop {
            if self.high < HALF {
            } else if self.low >= HALF {
                self.value -= HALF;
                self.low -= HALF;
                self.high -= HALF;
            } else if self.low >= QUARTER && self.high < 3 * QUARTER {
                self.value -= QUARTER;
                self.low -= QUARTER;
                self.high -= QUARTER;
            } else {
                break;
            }
            self.low <<= 1;
            self.high = (self.high << 1) | 1;
            self.value = (self.value << 1) | self.next_bit();
        }
        symbol
    }
}

/// Codes `symbols[i]` with the table of `contexts[i]`.
pub fn encode_sequence(
    symbols: &[usize],
    contexts: &[usize],
    model: &ConditionalModel,
) -> Result<BitString, CodecError> {
    assert_eq!(symbols.len(), contexts.len());
    let mut enc = Encoder::new();
    for (index, (&s, &c)) in symbols.iter().zip(contexts).enumerate() {
        match model.table(c) {
            Some(t) if s < t.alphabet_size() && t.frequency(s) > 0 => enc.encode(t, s),
            _ => return Err(CodecError::OutOfModel { index, symbol: s, context: c }),
        }
    }
    Ok(enc.finish())
}

/// Inverse of [`encode_sequence`] for a known context sequence.
pub fn decode_sequence(
    bits: &BitString,
    contexts: &[usize],
    model: &ConditionalModel,
) -> Result<Vec<usize>, CodecError> {
    let mut dec = Decoder::new(bits);
    let mut out = Vec::with_capacity(contexts.len());
    for (index, &c) in contexts.iter().enumerate() {
        let t = model.table(c).ok_or(CodecError::ImpossibleContext { index, context: c })?;
        out.push(dec.decode(t));
    }
    Ok(out)
}

/// Cost of a sequence under the quantized model, in bits.
pub fn ideal_length(symbols: &[usize], contexts: &[usize], model: &ConditionalModel) -> f64 {
    symbols
        .iter()
        .zip(contexts)
        .map(|(&s, &c)| model.table(c).map_or(f64::INFINITY, |t| t.cost(s)))
        .sum()
}
