//! Permutations of the four vertices of a tetrahedron.
//!
//! A [`Perm4`] is stored as its index into the lexicographically ordered
//! table of all 24 permutations, so composition, inversion and application
//! are table lookups.

use std::fmt;
use std::str::FromStr;

use crate::error::ParseError;

/// All 24 permutations of {0,1,2,3}, as image tuples, in lexicographic order.
const IMAGES: [[u8; 4]; 24] = build_images();

const fn build_images() -> [[u8; 4]; 24] {
    let mut out = [[0u8; 4]; 24];
    let mut k = 0;
    let mut a = 0;
    while a < 4 {
        let mut b = 0;
        while b < 4 {
            let mut c = 0;
            while c < 4 {
                let mut d = 0;
                while d < 4 {
                    if a != b && a != c && a != d && b != c && b != d && c != d {
                        out[k] = [a, b, c, d];
                        k += 1;
                    }
                    d += 1;
                }
                c += 1;
            }
            b += 1;
        }
        a += 1;
    }
    out
}

const fn index_of(img: [u8; 4]) -> u8 {
    let mut k = 0;
    while k < 24 {
        let e = IMAGES[k];
        if e[0] == img[0] && e[1] == img[1] && e[2] == img[2] && e[3] == img[3] {
            return k as u8;
        }
        k += 1;
    }
    panic!("not a permutation");
}

const fn build_compose() -> [[u8; 24]; 24] {
    let mut out = [[0u8; 24]; 24];
    let mut p = 0;
    while p < 24 {
        let mut q = 0;
        while q < 24 {
            let a = IMAGES[p];
            let b = IMAGES[q];
            // (p ∘ q)(i) = p(q(i))
            let img = [a[b[0] as usize], a[b[1] as usize], a[b[2] as usize], a[b[3] as usize]];
            out[p][q] = index_of(img);
            q += 1;
        }
        p += 1;
    }
    out
}

const fn build_inverse() -> [u8; 24] {
    let mut out = [0u8; 24];
    let mut p = 0;
    while p < 24 {
        let a = IMAGES[p];
        let mut inv = [0u8; 4];
        let mut i = 0;
        while i < 4 {
            inv[a[i] as usize] = i as u8;
            i += 1;
        }
        out[p] = index_of(inv);
        p += 1;
    }
    out
}

const fn build_parity() -> [bool; 24] {
    let mut out = [false; 24];
    let mut p = 0;
    while p < 24 {
        let a = IMAGES[p];
        let mut inversions = 0;
        let mut i = 0;
        while i < 4 {
            let mut j = i + 1;
            while j < 4 {
                if a[i] > a[j] {
                    inversions += 1;
                }
                j += 1;
            }
            i += 1;
        }
        out[p] = inversions % 2 == 1;
        p += 1;
    }
    out
}

static COMPOSE: [[u8; 24]; 24] = build_compose();
static INVERSE: [u8; 24] = build_inverse();
static ODD: [bool; 24] = build_parity();

/// A permutation of {0,1,2,3}.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Perm4(u8);

impl Perm4 {
    pub const IDENTITY: Perm4 = Perm4(0);

    /// Every permutation, in lexicographic order of image tuples.
    pub fn all() -> impl Iterator<Item = Perm4> {
        (0..24u8).map(Perm4)
    }

    /// Builds a permutation from its images; `None` if not bijective.
    pub fn from_images(images: [u8; 4]) -> Option<Perm4> {
        let mut seen = [false; 4];
        for &i in &images {
            if i > 3 || seen[i as usize] {
                return None;
            }
            seen[i as usize] = true;
        }
        Some(Perm4(index_of(images)))
    }

    /// The transposition exchanging `a` and `b` (identity when equal).
    pub fn transposition(a: usize, b: usize) -> Perm4 {
        let mut img = [0u8, 1, 2, 3];
        img.swap(a, b);
        Perm4(index_of(img))
    }

    /// Position of this permutation in [`Perm4::all`].
    #[inline]
    pub fn index(self) -> usize {
        self.0 as usize
    }

    #[inline]
    pub fn from_index(i: usize) -> Perm4 {
        assert!(i < 24);
        Perm4(i as u8)
    }

    #[inline]
    pub fn images(self) -> [u8; 4] {
        IMAGES[self.0 as usize]
    }

    /// Image of `i`.
    #[inline]
    pub fn apply(self, i: usize) -> usize {
        IMAGES[self.0 as usize][i] as usize
    }

    /// `self ∘ other`: apply `other` first.
    #[inline]
    pub fn compose(self, other: Perm4) -> Perm4 {
        Perm4(COMPOSE[self.0 as usize][other.0 as usize])
    }

    #[inline]
    pub fn inverse(self) -> Perm4 {
        Perm4(INVERSE[self.0 as usize])
    }

    #[inline]
    pub fn is_odd(self) -> bool {
        ODD[self.0 as usize]
    }
}

impl fmt::Debug for Perm4 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Perm4({self})")
    }
}

impl fmt::Display for Perm4 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let [a, b, c, d] = self.images();
        write!(f, "{a}{b}{c}{d}")
    }
}

impl FromStr for Perm4 {
    type Err = ParseError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let digits: Vec<u8> = s.bytes().map(|b| b.wrapping_sub(b'0')).collect();
        if digits.len() != 4 {
            return Err(ParseError::new(format!("bad permutation `{s}`")));
        }
        Perm4::from_images([digits[0], digits[1], digits[2], digits[3]])
            .ok_or_else(|| ParseError::new(format!("bad permutation `{s}`")))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn table_is_complete_and_sorted() {
        let all: Vec<[u8; 4]> = Perm4::all().map(|p| p.images()).collect();
        assert_eq!(all.len(), 24);
        assert!(all.windows(2).all(|w| w[0] < w[1]));
        assert_eq!(Perm4::IDENTITY.images(), [0, 1, 2, 3]);
    }

    #[test]
    fn parity_is_a_homomorphism() {
        for p in Perm4::all() {
            for q in Perm4::all() {
                assert_eq!(p.compose(q).is_odd(), p.is_odd() ^ q.is_odd());
            }
        }
        assert_eq!(Perm4::all().filter(|p| p.is_odd()).count(), 12);
    }

    #[test]
    fn inverse_and_composition() {
        for p in Perm4::all() {
            assert_eq!(p.compose(p.inverse()), Perm4::IDENTITY);
            for i in 0..4 {
                assert_eq!(p.inverse().apply(p.apply(i)), i);
            }
        }
        let p: Perm4 = "1230".parse().unwrap();
        let q: Perm4 = "1023".parse().unwrap();
        for i in 0..4 {
            assert_eq!(p.compose(q).apply(i), p.apply(q.apply(i)));
        }
    }

    #[test]
    fn transposition_is_odd() {
        assert!(Perm4::transposition(0, 3).is_odd());
        assert_eq!(Perm4::transposition(2, 2), Perm4::IDENTITY);
        assert_eq!(Perm4::transposition(1, 2).to_string(), "0213");
    }

    #[test]
    fn parse_rejects_garbage() {
        assert!("0012".parse::<Perm4>().is_err());
        assert!("012".parse::<Perm4>().is_err());
        assert!("01a3".parse::<Perm4>().is_err());
    }
}
