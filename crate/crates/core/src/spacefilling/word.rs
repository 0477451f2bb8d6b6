//! n-bit words used for child positions and orientation state.
//!
//! Dimensions up to 64 run on `u64`; larger ones fall back to `BigUint`.

use num_bigint::BigUint;
use num_traits::{One, ToPrimitive, Zero};

pub(crate) trait Word: Clone + Eq + std::fmt::Debug {
    fn zero_word() -> Self;
    fn single(bit: u32) -> Self;
    fn xor(&self, other: &Self) -> Self;
    fn bit(&self, i: u32) -> bool;
    fn set_bit(&mut self, i: u32);
    fn shr1(&self) -> Self;
    fn shl1(&self) -> Self;
    fn dec(&self) -> Self;
    fn is_zero_word(&self) -> bool;
    fn trailing_ones(&self) -> u32;
    /// Rotate left within an `n`-bit window.
    fn rotl(&self, r: u32, n: u32) -> Self;
    fn from_biguint(v: &BigUint) -> Self;
    fn to_biguint(&self) -> BigUint;

    fn rotr(&self, r: u32, n: u32) -> Self {
        self.rotl((n - r % n) % n, n)
    }

    fn gray(&self) -> Self {
        self.xor(&self.shr1())
    }

    fn gray_inverse(&self, n: u32) -> Self {
        let mut out = Self::zero_word();
        let mut acc = false;
        for j in (0..n).rev() {
            acc ^= self.bit(j);
            if acc {
                out.set_bit(j);
            }
        }
        out
    }
}

impl Word for u64 {
    fn zero_word() -> Self {
        0
    }
    fn single(bit: u32) -> Self {
        1u64 << bit
    }
    fn xor(&self, other: &Self) -> Self {
        self ^ other
    }
    fn bit(&self, i: u32) -> bool {
        (self >> i) & 1 == 1
    }
    fn set_bit(&mut self, i: u32) {
        *self |= 1u64 << i;
    }
    fn shr1(&self) -> Self {
        self >> 1
    }
    fn shl1(&self) -> Self {
        self << 1
    }
    fn dec(&self) -> Self {
        self - 1
    }
    fn is_zero_word(&self) -> bool {
        *self == 0
    }
    fn trailing_ones(&self) -> u32 {
        u64::trailing_ones(*self)
    }
    fn rotl(&self, r: u32, n: u32) -> Self {
        let r = r % n;
        if r == 0 {
            return *self;
        }
        let mask = if n == 64 { u64::MAX } else { (1u64 << n) - 1 };
        ((self << r) | (self >> (n - r))) & mask
    }
    fn from_biguint(v: &BigUint) -> Self {
        v.to_u64().expect("word exceeds 64 bits")
    }
    fn to_biguint(&self) -> BigUint {
        BigUint::from(*self)
    }
    fn gray_inverse(&self, _n: u32) -> Self {
        let mut x = *self;
        let mut shift = 1;
        while shift < 64 {
            x ^= x >> shift;
            shift <<= 1;
        }
        x
    }
}

impl Word for BigUint {
    fn zero_word() -> Self {
        Zero::zero()
    }
    fn single(bit: u32) -> Self {
        BigUint::one() << bit
    }
    fn xor(&self, other: &Self) -> Self {
        self ^ other
    }
    fn bit(&self, i: u32) -> bool {
        BigUint::bit(self, u64::from(i))
    }
    fn set_bit(&mut self, i: u32) {
        BigUint::set_bit(self, u64::from(i), true);
    }
    fn shr1(&self) -> Self {
        self >> 1u32
    }
    fn shl1(&self) -> Self {
        self << 1u32
    }
    fn dec(&self) -> Self {
        self - 1u32
    }
    fn is_zero_word(&self) -> bool {
        Zero::is_zero(self)
    }
    fn trailing_ones(&self) -> u32 {
        BigUint::trailing_ones(self) as u32
    }
    fn rotl(&self, r: u32, n: u32) -> Self {
        let r = r % n;
        if r == 0 {
            return self.clone();
        }
        let mask = (BigUint::one() << n) - 1u32;
        ((self << r) | (self >> (n - r))) & mask
    }
    fn from_biguint(v: &BigUint) -> Self {
        v.clone()
    }
    fn to_biguint(&self) -> BigUint {
        self.clone()
    }
}

/// Orientation of a cell: the corner the curve enters through (as a bit
/// word, bit `n-1-c` for coordinate `c`) and the axis along which it leaves.
#[derive(Clone, Debug, PartialEq, Eq)]
pub(crate) struct Orientation<W> {
    pub entry: W,
    pub dir: u32,
}

impl<W: Word> Orientation<W> {
    /// Whole cube: enter at the origin, leave along coordinate 0.
    pub fn root(n: u32) -> Self {
        Orientation { entry: W::zero_word(), dir: n - 1 }
    }

    pub fn exit(&self) -> W {
        self.entry.xor(&W::single(self.dir))
    }

    /// Corner bits of the `w`-th child within this cell.
    pub fn child_position(&self, w: &W, n: u32) -> W {
        w.gray().rotl(self.dir + 1, n).xor(&self.entry)
    }

    /// Inverse of [`Self::child_position`].
    pub fn child_rank(&self, position: &W, n: u32) -> W {
        position.xor(&self.entry).rotr(self.dir + 1, n).gray_inverse(n)
    }

    pub fn child(&self, w: &W, n: u32) -> Self {
        let entry = child_entry(w).rotl(self.dir + 1, n);
        Orientation {
            entry: self.entry.xor(&entry),
            dir: (self.dir + child_dir(w, n) + 1) % n,
        }
    }
}

/// Entry corner of child `w` in the canonical frame: `gray(2·⌊(w−1)/2⌋)`.
fn child_entry<W: Word>(w: &W) -> W {
    if w.is_zero_word() {
        W::zero_word()
    } else {
        w.dec().shr1().shl1().gray()
    }
}

/// Exit axis of child `w` in the canonical frame.
fn child_dir<W: Word>(w: &W, n: u32) -> u32 {
    if w.is_zero_word() {
        0
    } else if !w.bit(0) {
        w.dec().trailing_ones() % n
    } else {
        w.trailing_ones() % n
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn u64_and_biguint_agree() {
        for n in 1..=6u32 {
            for v in 0..(1u64 << n) {
                let b = BigUint::from(v);
                for r in 0..n {
                    assert_eq!(Word::rotl(&v, r, n), u64::from_biguint(&Word::rotl(&b, r, n)));
                    assert_eq!(Word::rotr(&v, r, n), u64::from_biguint(&Word::rotr(&b, r, n)));
                }
                assert_eq!(Word::gray_inverse(&v, n), u64::from_biguint(&Word::gray_inverse(&b, n)));
                assert_eq!(Word::trailing_ones(&v), Word::trailing_ones(&b));
                assert_eq!(Word::gray_inverse(&Word::gray(&v), n), v);
            }
        }
    }

    #[test]
    fn rotation_full_width() {
        let v = 0x8000_0000_0000_0001u64;
        assert_eq!(Word::rotl(&v, 1, 64), 0x3);
        assert_eq!(Word::rotr(&v, 1, 64), 0xC000_0000_0000_0000);
    }

    #[test]
    fn child_rank_inverts_position() {
        for n in 1..=5u32 {
            let o = Orientation::<u64> { entry: 0b1 & ((1 << n) - 1), dir: n / 2 };
            for w in 0..(1u64 << n) {
                let p = o.child_position(&w, n);
                assert_eq!(o.child_rank(&p, n), w);
            }
        }
    }
}
