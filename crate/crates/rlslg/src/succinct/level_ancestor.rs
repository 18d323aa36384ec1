//! Level ancestors by jump pointers plus ladders.
//!
//! A query jumps up by the largest power of two not exceeding the distance
//! and finishes on the ladder of the long path through the landing node.

use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LevelAncestor {
    level: Vec<u32>,
    /// `jump[k][v]` is the `2^k`-th ancestor of `v` (or `v`'s root).
    jump: Vec<Vec<u32>>,
    path_of: Vec<u32>,
    /// Ladder of each long path, ordered top-down, and the level of its first entry.
    ladders: Vec<(u32, Vec<u32>)>,
}

impl LevelAncestor {
    /// Builds from per-node parents. Fails with `CyclicGrammar` if the
    /// parent pointers contain a cycle.
    pub fn build(parents: &[Option<usize>]) -> Result<Self> {
        let n = parents.len();
        for p in parents.iter().flatten() {
            if *p >= n {
                return Err(Error::OutOfBounds { index: *p as u64, len: n as u64 });
            }
        }
        let mut children: Vec<Vec<u32>> = vec![Vec::new(); n];
        let mut roots = Vec::new();
        for (v, p) in parents.iter().enumerate() {
            match p {
                Some(p) => children[*p].push(v as u32),
                None => roots.push(v as u32),
            }
        }
        // BFS order from the roots gives levels; unreached nodes sit on cycles
        let mut order: Vec<u32> = Vec::with_capacity(n);
        let mut level = vec![0u32; n];
        order.extend_from_slice(&roots);
        let mut head = 0;
        while head < order.len() {
            let v = order[head] as usize;
            head += 1;
            for &c in &children[v] {
                level[c as usize] = level[v] + 1;
                order.push(c);
            }
        }
        if order.len() != n {
            let v = (0..n).find(|&v| !order.contains(&(v as u32))).unwrap_or(0);
            return Err(Error::CyclicGrammar { var: v as u32 });
        }
        let parent_or_self = |v: usize| parents[v].unwrap_or(v) as u32;
        let mut jump = vec![(0..n).map(parent_or_self).collect::<Vec<u32>>()];
        let max_level = level.iter().copied().max().unwrap_or(0);
        while (1u64 << jump.len()) <= max_level as u64 {
            let prev = jump.last().unwrap();
            let next = (0..n).map(|v| prev[prev[v] as usize]).collect();
            jump.push(next);
        }
        // heights, bottom-up
        let mut height = vec![0u32; n];
        for &v in order.iter().rev() {
            if let Some(p) = parents[v as usize] {
                height[p] = height[p].max(height[v as usize] + 1);
            }
        }
        let mut path_of = vec![u32::MAX; n];
        let mut ladders = Vec::new();
        for &top in &order {
            if path_of[top as usize] != u32::MAX {
                continue;
            }
            let id = ladders.len() as u32;
            let mut path = vec![top];
            let mut v = top as usize;
            path_of[v] = id;
            while let Some(&c) = children[v].iter().max_by_key(|&&c| (height[c as usize], std::cmp::Reverse(c))) {
                v = c as usize;
                path_of[v] = id;
                path.push(c);
            }
            let ext = (path.len() as u32).min(level[top as usize]);
            let mut up = Vec::with_capacity(ext as usize);
            let mut u = top as usize;
            for _ in 0..ext {
                u = parents[u].unwrap();
                up.push(u as u32);
            }
            up.reverse();
            up.extend_from_slice(&path);
            ladders.push((level[top as usize] - ext, up));
        }
        Ok(LevelAncestor { level, jump, path_of, ladders })
    }

    pub fn len(&self) -> usize {
        self.level.len()
    }

    pub fn is_empty(&self) -> bool {
        self.level.is_empty()
    }

    /// Depth of `v`; roots have level 0.
    #[inline]
    pub fn level(&self, v: usize) -> usize {
        self.level[v] as usize
    }

    /// The ancestor of `v` at level `lvl`.
    #[inline]
    pub fn ancestor(&self, v: usize, lvl: usize) -> Result<usize> {
        let lv = self.level[v] as usize;
        if lvl > lv {
            return Err(Error::LevelOutOfRange { level: lvl, max: lv });
        }
        let d = lv - lvl;
        if d == 0 {
            return Ok(v);
        }
        let k = 63 - (d as u64).leading_zeros() as usize;
        let u = self.jump[k][v] as usize;
        let (start, ladder) = &self.ladders[self.path_of[u] as usize];
        Ok(ladder[lvl - *start as usize] as usize)
    }

    /// Words stored, as a size estimate in bits.
    pub fn bits(&self) -> u64 {
        let words = self.level.len() * (2 + self.jump.len()) + self.ladders.iter().map(|l| l.1.len() + 1).sum::<usize>();
        32 * words as u64
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn naive(parents: &[Option<usize>], mut v: usize, lvl: usize) -> usize {
        let mut chain = vec![v];
        while let Some(p) = parents[v] {
            chain.push(p);
            v = p;
        }
        chain[chain.len() - 1 - lvl]
    }

    #[test]
    fn chain_and_self() {
        let parents: Vec<Option<usize>> = (0..100).map(|i| if i == 0 { None } else { Some(i - 1) }).collect();
        let la = LevelAncestor::build(&parents).unwrap();
        assert_eq!(la.ancestor(57, 57).unwrap(), 57);
        assert_eq!(la.ancestor(57, 0).unwrap(), 0);
        assert_eq!(la.ancestor(99, 31).unwrap(), 31);
        assert_eq!(la.ancestor(3, 4), Err(Error::LevelOutOfRange { level: 4, max: 3 }));
    }

    #[test]
    fn cycle_rejected() {
        assert!(LevelAncestor::build(&[Some(1), Some(0)]).is_err());
    }

    #[test]
    fn random_forests() {
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        for _ in 0..30 {
            let n = rng.gen_range(1..400);
            // random labels so parents are not always lower ids
            let mut perm: Vec<usize> = (0..n).collect();
            for i in (1..n).rev() {
                perm.swap(i, rng.gen_range(0..=i));
            }
            let mut parents = vec![None; n];
            for i in 1..n {
                if rng.gen_bool(0.95) {
                    let p = if rng.gen_bool(0.7) { i - 1 } else { rng.gen_range(0..i) };
                    parents[perm[i]] = Some(perm[p]);
                }
            }
            let la = LevelAncestor::build(&parents).unwrap();
            for _ in 0..300 {
                let v = rng.gen_range(0..n);
                let l = rng.gen_range(0..=la.level(v));
                assert_eq!(la.ancestor(v, l).unwrap(), naive(&parents, v, l));
            }
        }
    }
}
