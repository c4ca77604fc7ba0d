//! Arithmetic in GF(2^w) for w ∈ {4, 8, 16}.
//!
//! Each width has one fixed reducing polynomial and one immutable [`Field`]
//! context holding log/antilog tables. Contexts are built lazily and live for
//! the whole process, so matrices can hold a `&'static Field`.

use std::fmt;
use std::sync::OnceLock;

use crate::error::{IdaError, Result};

/// A field element. Only the low `w` bits are meaningful; the width lives in
/// the enclosing [`Field`].
pub type FieldElement = u16;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum FieldWidth {
    W4,
    W8,
    W16,
}

impl FieldWidth {
    pub const ALL: [FieldWidth; 3] = [FieldWidth::W4, FieldWidth::W8, FieldWidth::W16];

    pub fn bits(self) -> u32 {
        match self {
            FieldWidth::W4 => 4,
            FieldWidth::W8 => 8,
            FieldWidth::W16 => 16,
        }
    }

    /// Field order 2^w.
    pub fn order(self) -> u32 {
        1 << self.bits()
    }

    /// Reducing polynomial including the x^w term.
    pub fn polynomial(self) -> u32 {
        match self {
            FieldWidth::W4 => 0x13,
            FieldWidth::W8 => 0x11B,
            FieldWidth::W16 => 0x1100B,
        }
    }

    /// Hex digits needed to print one element.
    pub fn hex_digits(self) -> usize {
        (self.bits() / 4) as usize
    }

    pub fn field(self) -> &'static Field {
        Field::get(self)
    }
}

impl TryFrom<u32> for FieldWidth {
    type Error = IdaError;

    fn try_from(bits: u32) -> Result<Self> {
        match bits {
            4 => Ok(FieldWidth::W4),
            8 => Ok(FieldWidth::W8),
            16 => Ok(FieldWidth::W16),
            other => Err(IdaError::UnsupportedWidth(other)),
        }
    }
}

impl fmt::Display for FieldWidth {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.bits())
    }
}

/// Immutable arithmetic context for one GF(2^w).
pub struct Field {
    width: FieldWidth,
    generator: FieldElement,
    /// `log[x]` for x ≠ 0; `log[0]` is unused.
    log: Vec<u16>,
    /// Antilog table of length 2·(2^w − 1) so that `exp[log a + log b]`
    /// needs no reduction.
    exp: Vec<u16>,
}

impl fmt::Debug for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Field")
            .field("width", &self.width)
            .field("polynomial", &format_args!("{:#x}", self.width.polynomial()))
            .field("generator", &format_args!("{:#x}", self.generator))
            .finish()
    }
}

impl PartialEq for Field {
    fn eq(&self, other: &Self) -> bool {
        self.width == other.width
    }
}

impl Eq for Field {}

static FIELDS: [OnceLock<Field>; 3] = [OnceLock::new(), OnceLock::new(), OnceLock::new()];

/// Multiply by `g` with shift-and-xor, reducing as we go.
fn mul_slow(mut a: u32, mut g: u32, width: FieldWidth) -> u32 {
    let top = width.order();
    let poly = width.polynomial();
    let mut acc = 0;
    while g != 0 {
        if g & 1 != 0 {
            acc ^= a;
        }
        g >>= 1;
        a <<= 1;
        if a & top != 0 {
            a ^= poly;
        }
    }
    acc
}

impl Field {
    pub fn get(width: FieldWidth) -> &'static Field {
        let slot = match width {
            FieldWidth::W4 => &FIELDS[0],
            FieldWidth::W8 => &FIELDS[1],
            FieldWidth::W16 => &FIELDS[2],
        };
        slot.get_or_init(|| Field::build(width))
    }

    fn build(width: FieldWidth) -> Field {
        let group = (width.order() - 1) as usize;
        // Smallest element whose powers cover the whole multiplicative group.
        // For 0x11B this is 0x03; x itself only has order 51 there.
        for candidate in 2..width.order() {
            let mut exp = vec![0u16; 2 * group];
            let mut log = vec![0u16; width.order() as usize];
            let mut value = 1u32;
            let mut full = true;
            for (i, slot) in exp.iter_mut().take(group).enumerate() {
                if i > 0 && value == 1 {
                    full = false;
                    break;
                }
                *slot = value as u16;
                log[value as usize] = i as u16;
                value = mul_slow(value, candidate, width);
            }
            if !full || value != 1 {
                continue;
            }
            for i in group..2 * group {
                exp[i] = exp[i - group];
            }
            return Field {
                width,
                generator: candidate as u16,
                log,
                exp,
            };
        }
        unreachable!("reducing polynomial {:#x} is not irreducible", width.polynomial())
    }

    pub fn width(&self) -> FieldWidth {
        self.width
    }

    pub fn generator(&self) -> FieldElement {
        self.generator
    }

    pub fn order(&self) -> u32 {
        self.width.order()
    }

    pub fn contains(&self, a: FieldElement) -> bool {
        u32::from(a) < self.order()
    }

    pub fn check(&self, a: u32) -> Result<FieldElement> {
        if a < self.order() {
            Ok(a as FieldElement)
        } else {
            Err(IdaError::ElementOutOfRange {
                value: a,
                width: self.width.bits(),
            })
        }
    }

    #[inline]
    pub fn add(&self, a: FieldElement, b: FieldElement) -> FieldElement {
        a ^ b
    }

    #[inline]
    pub fn sub(&self, a: FieldElement, b: FieldElement) -> FieldElement {
        a ^ b
    }

    #[inline]
    pub fn mul(&self, a: FieldElement, b: FieldElement) -> FieldElement {
        if a == 0 || b == 0 {
            return 0;
        }
        self.exp[self.log[a as usize] as usize + self.log[b as usize] as usize]
    }

    pub fn inv(&self, a: FieldElement) -> Result<FieldElement> {
        if a == 0 {
            return Err(IdaError::NoInverse);
        }
        let group = self.order() as usize - 1;
        Ok(self.exp[(group - self.log[a as usize] as usize) % group])
    }

    pub fn div(&self, a: FieldElement, b: FieldElement) -> Result<FieldElement> {
        Ok(self.mul(a, self.inv(b)?))
    }

    /// `a^e` with the convention `pow(0, 0) = 1`.
    pub fn pow(&self, a: FieldElement, e: u64) -> FieldElement {
        if e == 0 {
            return 1;
        }
        if a == 0 {
            return 0;
        }
        let group = u64::from(self.order() - 1);
        let l = (u64::from(self.log[a as usize]) * (e % group)) % group;
        self.exp[l as usize]
    }

    /// `dst[t] += c · src[t]` for every position.
    pub fn mul_acc(&self, dst: &mut [FieldElement], src: &[FieldElement], c: FieldElement) {
        debug_assert_eq!(dst.len(), src.len());
        match c {
            0 => {}
            1 => dst.iter_mut().zip(src).for_each(|(d, &s)| *d ^= s),
            _ => {
                let lc = self.log[c as usize] as usize;
                for (d, &s) in dst.iter_mut().zip(src) {
                    if s != 0 {
                        *d ^= self.exp[lc + self.log[s as usize] as usize];
                    }
                }
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    /// Carry-less product followed by polynomial long division.
    fn oracle_mul(a: u32, b: u32, width: FieldWidth) -> u32 {
        let mut product = 0u64;
        for bit in 0..16 {
            if (b >> bit) & 1 == 1 {
                product ^= u64::from(a) << bit;
            }
        }
        let poly = u64::from(width.polynomial());
        let w = width.bits();
        for deg in (w..32).rev() {
            if (product >> deg) & 1 == 1 {
                product ^= poly << (deg - w);
            }
        }
        product as u32
    }

    #[test]
    fn add_examples() {
        let f = Field::get(FieldWidth::W8);
        assert_eq!(f.add(0x00, 0x5A), 0x5A);
        assert_eq!(f.add(0x5A, 0x5A), 0x00);
        assert_eq!(f.add(0x01, 0x02), 0x03);
    }

    #[test]
    fn mul_examples() {
        let f = Field::get(FieldWidth::W8);
        for x in 0..256u16 {
            assert_eq!(f.mul(0x01, x), x);
        }
        assert_eq!(f.mul(0x02, 0x02), 0x04);
        assert_eq!(oracle_mul(0x80, 0x02, FieldWidth::W8), 0x1B);
        assert_eq!(f.mul(0x80, 0x02), 0x1B);
    }

    #[test]
    fn inv_examples() {
        let f = Field::get(FieldWidth::W8);
        assert_eq!(f.inv(0x01), Ok(0x01));
        assert_eq!(f.inv(0), Err(IdaError::NoInverse));
        let brute = (1..256u32).find(|&b| oracle_mul(2, b, FieldWidth::W8) == 1).unwrap();
        assert_eq!(brute, 0x8D);
        assert_eq!(f.inv(0x02), Ok(0x8D));
        for x in 1..256u16 {
            assert_eq!(f.inv(f.inv(x).unwrap()), Ok(x));
            assert_eq!(f.mul(x, f.inv(x).unwrap()), 1);
        }
    }

    #[test]
    fn pow_examples() {
        let f = Field::get(FieldWidth::W8);
        for x in 0..256u16 {
            assert_eq!(f.pow(x, 0), 1);
            assert_eq!(f.pow(x, 1), x);
        }
        let chained = (0..8).fold(1u32, |acc, _| oracle_mul(acc, 2, FieldWidth::W8));
        assert_eq!(chained, 0x1B);
        assert_eq!(f.pow(0x02, 8), 0x1B);
        assert_eq!(f.pow(0, 5), 0);
    }

    #[test]
    fn tables_are_consistent() {
        for width in FieldWidth::ALL {
            let f = Field::get(width);
            let group = f.order() - 1;
            for x in 1..f.order() {
                assert_eq!(f.exp[f.log[x as usize] as usize] as u32, x);
            }
            // generator order is exactly 2^w - 1
            let mut seen = vec![false; f.order() as usize];
            for e in 0..group {
                let v = f.pow(f.generator(), e.into());
                assert!(!seen[v as usize]);
                seen[v as usize] = true;
            }
        }
        assert_eq!(Field::get(FieldWidth::W8).generator(), 0x03);
    }

    #[test]
    fn w4_exhaustive_against_oracle() {
        let f = Field::get(FieldWidth::W4);
        for a in 0..16u16 {
            for b in 0..16u16 {
                let p = f.mul(a, b);
                assert_eq!(u32::from(p), oracle_mul(a.into(), b.into(), FieldWidth::W4));
                assert_eq!(p, f.mul(b, a));
                for c in 0..16u16 {
                    assert_eq!(f.mul(a, f.add(b, c)), f.add(f.mul(a, b), f.mul(a, c)));
                    assert_eq!(f.mul(f.mul(a, b), c), f.mul(a, f.mul(b, c)));
                }
            }
        }
    }

    #[test]
    fn w8_w16_random_against_oracle() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for width in [FieldWidth::W8, FieldWidth::W16] {
            let f = Field::get(width);
            for _ in 0..100_000 {
                let a = rng.gen_range(0..f.order()) as u16;
                let b = rng.gen_range(0..f.order()) as u16;
                let c = rng.gen_range(0..f.order()) as u16;
                assert_eq!(u32::from(f.mul(a, b)), oracle_mul(a.into(), b.into(), width));
                assert_eq!(f.mul(a, f.add(b, c)), f.add(f.mul(a, b), f.mul(a, c)));
            }
        }
    }

    #[test]
    fn mul_acc_matches_scalar() {
        let f = Field::get(FieldWidth::W16);
        let src: Vec<u16> = (0..100u16).map(|i| i.wrapping_mul(977)).collect();
        for c in [0u16, 1, 2, 0xBEEF] {
            let mut dst = vec![0x1234u16; src.len()];
            f.mul_acc(&mut dst, &src, c);
            for (d, &s) in dst.iter().zip(&src) {
                assert_eq!(*d, 0x1234 ^ f.mul(c, s));
            }
        }
    }

    #[test]
    fn width_parsing() {
        assert_eq!(FieldWidth::try_from(8), Ok(FieldWidth::W8));
        assert_eq!(FieldWidth::try_from(7), Err(IdaError::UnsupportedWidth(7)));
        assert!(Field::get(FieldWidth::W4).check(16).is_err());
    }
}
