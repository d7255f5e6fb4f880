//! Fixed-width and growable bitmasks behind one trait, so the search code can
//! run on plain integers for small hosts and fall back to [`VertexSet`] for
//! big ones.

use std::fmt::Debug;
use std::hash::Hash;

use crate::graph::VertexSet;

pub trait Mask: Clone + Eq + Hash + Debug {
    /// Largest vertex count this mask type can represent.
    const CAPACITY: usize;

    fn empty(n: usize) -> Self;
    fn singleton(n: usize, i: usize) -> Self {
        let mut m = Self::empty(n);
        m.set(i);
        m
    }
    fn test(&self, i: usize) -> bool;
    fn set(&mut self, i: usize);
    fn clear(&mut self, i: usize);
    fn and(&self, other: &Self) -> Self;
    fn or(&self, other: &Self) -> Self;
    fn and_not(&self, other: &Self) -> Self;
    fn is_empty(&self) -> bool;
    fn intersects(&self, other: &Self) -> bool;
    fn count(&self) -> usize;
    fn first(&self) -> Option<usize>;
    fn ones(&self) -> Vec<usize>;
}

macro_rules! int_mask {
    ($t:ty, $bits:expr) => {
        impl Mask for $t {
            const CAPACITY: usize = $bits;

            #[inline]
            fn empty(_n: usize) -> Self {
                0
            }
            #[inline]
            fn test(&self, i: usize) -> bool {
                *self >> i & 1 == 1
            }
            #[inline]
            fn set(&mut self, i: usize) {
                *self |= 1 << i;
            }
            #[inline]
            fn clear(&mut self, i: usize) {
                *self &= !(1 << i);
            }
            #[inline]
            fn and(&self, other: &Self) -> Self {
                self & other
            }
            #[inline]
            fn or(&self, other: &Self) -> Self {
                self | other
            }
            #[inline]
            fn and_not(&self, other: &Self) -> Self {
                self & !other
            }
            #[inline]
            fn is_empty(&self) -> bool {
                *self == 0
            }
            #[inline]
            fn intersects(&self, other: &Self) -> bool {
                self & other != 0
            }
            #[inline]
            fn count(&self) -> usize {
                self.count_ones() as usize
            }
            #[inline]
            fn first(&self) -> Option<usize> {
                if *self == 0 {
                    None
                } else {
                    Some(self.trailing_zeros() as usize)
                }
            }
            fn ones(&self) -> Vec<usize> {
                let mut out = Vec::with_capacity(self.count());
                let mut w = *self;
                while w != 0 {
                    out.push(w.trailing_zeros() as usize);
                    w &= w - 1;
                }
                out
            }
        }
    };
}

int_mask!(u64, 64);
int_mask!(u128, 128);

impl Mask for VertexSet {
    const CAPACITY: usize = usize::MAX;

    fn empty(n: usize) -> Self {
        VertexSet::with_capacity(n)
    }
    fn test(&self, i: usize) -> bool {
        self.contains(i)
    }
    fn set(&mut self, i: usize) {
        self.insert(i)
    }
    fn clear(&mut self, i: usize) {
        self.remove(i)
    }
    fn and(&self, other: &Self) -> Self {
        let mut s = self.clone();
        s.intersect_with(other);
        s
    }
    fn or(&self, other: &Self) -> Self {
        let mut s = self.clone();
        s.union_with(other);
        s
    }
    fn and_not(&self, other: &Self) -> Self {
        let mut s = self.clone();
        s.difference_with(other);
        s
    }
    fn is_empty(&self) -> bool {
        VertexSet::is_empty(self)
    }
    fn intersects(&self, other: &Self) -> bool {
        !self.is_disjoint(other)
    }
    fn count(&self) -> usize {
        self.len()
    }
    fn first(&self) -> Option<usize> {
        VertexSet::first(self)
    }
    fn ones(&self) -> Vec<usize> {
        self.iter().collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn exercise<M: Mask>(n: usize) {
        let mut a = M::empty(n);
        a.set(1);
        a.set(n - 1);
        let b = M::singleton(n, 1);
        assert!(a.test(n - 1));
        assert_eq!(a.count(), 2);
        assert_eq!(a.and(&b), b);
        assert_eq!(a.and_not(&b).ones(), vec![n - 1]);
        assert_eq!(b.or(&a), a);
        assert!(a.intersects(&b));
        assert_eq!(a.first(), Some(1));
        a.clear(1);
        a.clear(n - 1);
        assert!(a.is_empty());
        assert_eq!(a.first(), None);
    }

    #[test]
    fn all_mask_types_agree() {
        exercise::<u64>(64);
        exercise::<u128>(128);
        exercise::<VertexSet>(300);
    }
}
