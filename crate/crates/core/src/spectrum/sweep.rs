use crate::error::{domain, unsupported, Result};
use crate::poly::{mask, Generator};

/// Largest `p` for which the dual sweep is supported (2^24 counters).
pub const MAX_SWEEP_DEGREE: u32 = 24;

/// Weights are 16-bit counters.
pub const MAX_SWEEP_LENGTH: usize = u16::MAX as usize;

const LOW_BITS: u32 = 12;
const LANES: usize = 4;

/// The `2^p` dual codewords of `C_{g,n}`, held as their Hamming weights.
///
/// Entry `u` is the weight of `(<u,h_0>, ..., <u,h_{n-1}>)` where
/// `h_j = x^j mod g`. Extending to `n + 1` adds `parity(u & h_n)` to every
/// entry. The state is owned by one sweep and mutated in place.
#[derive(Clone)]
pub struct DualSweepState {
    g: Generator,
    order: u64,
    n: usize,
    next_column: u64,
    weights: Vec<u16>,
    low_table: Vec<u16>,
}

impl DualSweepState {
    /// Empty state at `n = 0` (every dual word has weight 0).
    pub fn new(g: Generator) -> Result<Self> {
        if g.degree() > MAX_SWEEP_DEGREE {
            return Self::with_order(g, 0);
        }
        let order = g.order()?;
        Self::with_order(g, order)
    }

    pub fn with_order(g: Generator, order: u64) -> Result<Self> {
        let p = g.degree();
        if p > MAX_SWEEP_DEGREE {
            return Err(unsupported!(
                "dual enumeration needs 2^{p} counters; at most p={MAX_SWEEP_DEGREE} is supported"
            ));
        }
        let lo = p.min(LOW_BITS);
        Ok(DualSweepState {
            g,
            order,
            n: 0,
            next_column: 1,
            weights: vec![0; 1 << p],
            low_table: vec![0; 1 << lo],
        })
    }

    pub fn generator(&self) -> Generator {
        self.g
    }

    pub fn order(&self) -> u64 {
        self.order
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn weights(&self) -> &[u16] {
        &self.weights
    }

    fn next(&mut self) -> Result<u64> {
        if self.n as u64 >= self.order {
            return Err(domain!(
                "cannot extend {} past its order n_c={}",
                self.g,
                self.order
            ));
        }
        if self.n >= MAX_SWEEP_LENGTH {
            return Err(unsupported!(
                "dual sweep lengths are limited to {MAX_SWEEP_LENGTH}"
            ));
        }
        let h = self.next_column;
        self.next_column = self.g.mulx(h);
        self.n += 1;
        Ok(h)
    }

    fn fill_low_table(&mut self, h: u64) {
        let lo_mask = self.low_table.len() as u64 - 1;
        let hl = h & lo_mask;
        for (u, t) in self.low_table.iter_mut().enumerate() {
            *t = ((u as u64 & hl).count_ones() & 1) as u16;
        }
    }

    /// Extends to length `n + 1`.
    pub fn extend(&mut self) -> Result<()> {
        let h = self.next()?;
        self.fill_low_table(h);
        let lo = self.low_table.len();
        let hh = h >> lo.trailing_zeros();
        for (hi, chunk) in self.weights.chunks_exact_mut(lo).enumerate() {
            let flip = ((hi as u64 & hh).count_ones() & 1) as u16;
            for (w, &t) in chunk.iter_mut().zip(&self.low_table) {
                *w = w.wrapping_add(t ^ flip);
            }
        }
        Ok(())
    }

    /// Extends to `n + 1` and writes the new weight histogram into `hist`
    /// (one slot per weight `0..=n` of the extended state).
    pub fn extend_with_histogram(&mut self, hist: &mut Vec<u32>) -> Result<()> {
        let h = self.next()?;
        self.fill_low_table(h);
        hist.clear();
        hist.resize(self.n + 1, 0);
        // interleaved tallies break the store-to-load dependency on
        // repeated weights
        let stride = self.n + 1;
        let mut tallies = vec![0u32; LANES * stride];
        let lo = self.low_table.len();
        let hh = h >> lo.trailing_zeros();
        for (hi, chunk) in self.weights.chunks_exact_mut(lo).enumerate() {
            let flip = ((hi as u64 & hh).count_ones() & 1) as u16;
            for (w, &t) in chunk.iter_mut().zip(&self.low_table) {
                *w = w.wrapping_add(t ^ flip);
            }
            let mut groups = chunk.chunks_exact(LANES);
            for q in &mut groups {
                for (lane, &w) in q.iter().enumerate() {
                    tallies[lane * stride + w as usize] += 1;
                }
            }
            for &w in groups.remainder() {
                tallies[w as usize] += 1;
            }
        }
        for (w, slot) in hist.iter_mut().enumerate() {
            *slot = (0..LANES).map(|lane| tallies[lane * stride + w]).sum();
        }
        Ok(())
    }

    /// Dense histogram of the current weights.
    pub fn histogram(&self) -> Vec<u64> {
        let mut hist = vec![0u64; self.n + 1];
        for &w in &self.weights {
            hist[w as usize] += 1;
        }
        hist
    }

    /// Column `h_n` that the next extension will append.
    pub fn next_column(&self) -> u64 {
        self.next_column & mask(self.g.degree())
    }
}
