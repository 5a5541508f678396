use crate::error::{Error, Result};
use crate::lattice::Sector;

/// Default cap on the sector dimension (L = 12 at half filling is 853 776).
pub const DEFAULT_MAX_DIMENSION: usize = 4_000_000;

/// Rank tables are dense up to this many sites, binary search beyond.
const DENSE_RANK_MAX_SITES: usize = 20;

/// Occupation masks of one species with their ranks.
#[derive(Debug, Clone)]
pub struct SpeciesBasis {
    masks: Vec<u32>,
    rank: Option<Vec<u32>>,
}

impl SpeciesBasis {
    fn new(l: usize, count: usize) -> Self {
        let masks = masks_with_popcount(l, count);
        let rank = (l <= DENSE_RANK_MAX_SITES).then(|| {
            let mut table = vec![u32::MAX; 1usize << l];
            for (i, &m) in masks.iter().enumerate() {
                table[m as usize] = i as u32;
            }
            table
        });
        Self { masks, rank }
    }

    pub fn masks(&self) -> &[u32] {
        &self.masks
    }

    pub fn len(&self) -> usize {
        self.masks.len()
    }

    pub fn is_empty(&self) -> bool {
        self.masks.is_empty()
    }

    #[inline]
    pub fn index_of(&self, mask: u32) -> Option<usize> {
        match &self.rank {
            Some(table) => match table.get(mask as usize) {
                Some(&r) if r != u32::MAX => Some(r as usize),
                _ => None,
            },
            None => self.masks.binary_search(&mask).ok(),
        }
    }
}

/// All `L`-bit masks with `count` set bits, increasing (Gosper's hack).
fn masks_with_popcount(l: usize, count: usize) -> Vec<u32> {
    if count == 0 {
        return vec![0];
    }
    let limit: u64 = 1u64 << l;
    let mut out = Vec::with_capacity(binomial(l, count) as usize);
    let mut m: u64 = (1u64 << count) - 1;
    while m < limit {
        out.push(m as u32);
        let c = m & m.wrapping_neg();
        let r = m + c;
        m = (((r ^ m) >> 2) / c) | r;
    }
    out
}

pub fn binomial(n: usize, k: usize) -> u128 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    (0..k).fold(1u128, |acc, i| acc * (n - i) as u128 / (i + 1) as u128)
}

/// Fock basis of a fixed `(L, N↑, N↓)` sector. States are ordered by
/// `(up mask, down mask)`; the linear index is `i_up · dim_dn + i_dn`.
#[derive(Debug, Clone)]
pub struct SectorBasis {
    sector: Sector,
    up: SpeciesBasis,
    dn: SpeciesBasis,
}

impl SectorBasis {
    pub fn new(sector: Sector) -> Result<Self> {
        Self::with_limit(sector, DEFAULT_MAX_DIMENSION)
    }

    pub fn with_limit(sector: Sector, max_dimension: usize) -> Result<Self> {
        let l = sector.l();
        let dimension = binomial(l, sector.n_up()) * binomial(l, sector.n_dn());
        if dimension > max_dimension as u128 {
            return Err(Error::DimensionTooLarge {
                dimension,
                limit: max_dimension as u128,
            });
        }
        Ok(Self {
            sector,
            up: SpeciesBasis::new(l, sector.n_up()),
            dn: SpeciesBasis::new(l, sector.n_dn()),
        })
    }

    pub fn sector(&self) -> Sector {
        self.sector
    }

    pub fn l(&self) -> usize {
        self.sector.l()
    }

    pub fn dimension(&self) -> usize {
        self.up.len() * self.dn.len()
    }

    pub fn up(&self) -> &SpeciesBasis {
        &self.up
    }

    pub fn dn(&self) -> &SpeciesBasis {
        &self.dn
    }

    #[inline]
    pub fn state(&self, index: usize) -> (u32, u32) {
        let nd = self.dn.len();
        (self.up.masks[index / nd], self.dn.masks[index % nd])
    }

    #[inline]
    pub fn index_of(&self, up: u32, dn: u32) -> Option<usize> {
        Some(self.up.index_of(up)? * self.dn.len() + self.dn.index_of(dn)?)
    }

    pub fn states(&self) -> impl Iterator<Item = (u32, u32)> + '_ {
        self.up
            .masks
            .iter()
            .flat_map(move |&u| self.dn.masks.iter().map(move |&d| (u, d)))
    }

    pub(crate) fn check_len(&self, len: usize) -> Result<()> {
        if len != self.dimension() {
            return Err(Error::BasisMismatch {
                expected: self.dimension(),
                got: len,
            });
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn basis(l: usize, u: usize, d: usize) -> SectorBasis {
        SectorBasis::new(Sector::new(l, u, d).unwrap()).unwrap()
    }

    #[test]
    fn dimensions() {
        assert_eq!(basis(4, 2, 1).dimension(), 24);
        assert_eq!(basis(2, 0, 0).dimension(), 1);
        let big = Sector::new(16, 8, 8).unwrap();
        match SectorBasis::new(big) {
            Err(Error::DimensionTooLarge { dimension, .. }) => assert_eq!(dimension, 165_636_900),
            other => panic!("unexpected {other:?}"),
        }
        assert_eq!(binomial(16, 8) * binomial(16, 8), 165_636_900);
        assert_eq!(basis(12, 6, 6).dimension(), 853_776);
    }

    #[test]
    fn masks_are_sorted_and_ranked() {
        for l in 1..=10 {
            for k in 0..=l {
                let sb = SpeciesBasis::new(l, k);
                assert_eq!(sb.len() as u128, binomial(l, k));
                assert!(sb.masks().windows(2).all(|w| w[0] < w[1]));
                for (i, &m) in sb.masks().iter().enumerate() {
                    assert_eq!(m.count_ones() as usize, k);
                    assert!(m < (1u32 << l));
                    assert_eq!(sb.index_of(m), Some(i));
                }
            }
        }
    }

    #[test]
    fn sector_index_is_a_bijection() {
        let b = basis(6, 3, 2);
        for (i, (u, d)) in b.states().enumerate() {
            assert_eq!(b.state(i), (u, d));
            assert_eq!(b.index_of(u, d), Some(i));
        }
        assert_eq!(b.index_of(0b1, 0b11), None);
    }

    #[test]
    fn binary_search_ranks_beyond_dense_tables() {
        let sb = SpeciesBasis::new(22, 2);
        assert!(sb.rank.is_none());
        for (i, &m) in sb.masks().iter().enumerate() {
            assert_eq!(sb.index_of(m), Some(i));
        }
    }
}
