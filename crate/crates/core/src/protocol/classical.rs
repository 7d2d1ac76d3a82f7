//! The classical padlock cipher over words modulo 2^w, and the passive
//! attack that breaks it: the difference of the first two wire words is
//! Bob's key, and subtracting it from the third reveals the message.
//!
//! Addition is used rather than XOR. With XOR keys the break is even more
//! direct, since `seq1 ⊕ seq2 ⊕ seq3 = m`.

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// An unsigned word of `width` bits.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct ClassicalWord {
    value: u64,
    width: u32,
}

impl ClassicalWord {
    pub const DEFAULT_WIDTH: u32 = 8;

    pub fn new(value: u64, width: u32) -> Result<Self> {
        check_width(width)?;
        if value > mask(width) {
            return Err(Error::invalid(format!("value {value} does not fit in {width} bits")));
        }
        Ok(ClassicalWord { value, width })
    }

    pub fn value(&self) -> u64 {
        self.value
    }

    pub fn width(&self) -> u32 {
        self.width
    }

    fn add(self, other: u64) -> Self {
        ClassicalWord { value: self.value.wrapping_add(other) & mask(self.width), width: self.width }
    }

    fn sub(self, other: u64) -> Self {
        ClassicalWord { value: self.value.wrapping_sub(other) & mask(self.width), width: self.width }
    }
}

fn check_width(width: u32) -> Result<()> {
    if !(1..=64).contains(&width) {
        return Err(Error::invalid(format!("word width must be in 1..=64, got {width}")));
    }
    Ok(())
}

fn mask(width: u32) -> u64 {
    if width == 64 {
        u64::MAX
    } else {
        (1u64 << width) - 1
    }
}

/// The three publicly visible word sequences of a classical run.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct KsWire {
    /// m + A
    pub seq1: Vec<ClassicalWord>,
    /// m + A + B
    pub seq2: Vec<ClassicalWord>,
    /// m + B
    pub seq3: Vec<ClassicalWord>,
}

/// Wire sequences plus what the receiver decoded with his own keys.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct KsRun {
    pub wire: KsWire,
    pub received: Vec<ClassicalWord>,
}

/// Runs the classical three-pass exchange with explicit per-word keys.
pub fn classical_ks_run_with_keys(message: &[ClassicalWord], a_keys: &[u64], b_keys: &[u64]) -> Result<KsRun> {
    if a_keys.len() != message.len() || b_keys.len() != message.len() {
        return Err(Error::invalid("one A key and one B key are needed per word"));
    }
    let mut wire = KsWire { seq1: Vec::new(), seq2: Vec::new(), seq3: Vec::new() };
    let mut received = Vec::with_capacity(message.len());
    for ((&m, &a), &b) in message.iter().zip(a_keys).zip(b_keys) {
        let s1 = m.add(a);
        let s2 = s1.add(b);
        let s3 = s2.sub(a);
        wire.seq1.push(s1);
        wire.seq2.push(s2);
        wire.seq3.push(s3);
        received.push(s3.sub(b));
    }
    Ok(KsRun { wire, received })
}

/// Runs the exchange with keys drawn uniformly per word.
pub fn classical_ks_run<R: Rng + ?Sized>(message: &[ClassicalWord], rng: &mut R) -> Result<KsRun> {
    let draw = |rng: &mut R, w: &ClassicalWord| rng.random::<u64>() & mask(w.width);
    let a: Vec<u64> = message.iter().map(|w| draw(rng, w)).collect();
    let b: Vec<u64> = message.iter().map(|w| draw(rng, w)).collect();
    classical_ks_run_with_keys(message, &a, &b)
}

/// Eavesdropper's recovery from the three wire sequences alone.
pub fn classical_ks_break(wire: &KsWire) -> Result<Vec<ClassicalWord>> {
    let len = wire.seq1.len();
    if wire.seq2.len() != len || wire.seq3.len() != len {
        return Err(Error::invalid("wire sequences differ in length"));
    }
    wire.seq1
        .iter()
        .zip(&wire.seq2)
        .zip(&wire.seq3)
        .map(|((s1, s2), s3)| {
            if s1.width != s2.width || s2.width != s3.width {
                return Err(Error::invalid("wire words differ in width"));
            }
            let b = s2.sub(s1.value).value;
            Ok(s3.sub(b))
        })
        .collect()
}

/// Random message of `words` words of the given width.
pub fn random_message<R: Rng + ?Sized>(words: usize, width: u32, rng: &mut R) -> Result<Vec<ClassicalWord>> {
    check_width(width)?;
    Ok((0..words).map(|_| ClassicalWord { value: rng.random::<u64>() & mask(width), width }).collect())
}
