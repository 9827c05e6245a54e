//! Dense boolean adjacency stored as `u64` words per row.

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BitMatrix {
    n: usize,
    words: usize,
    bits: Vec<u64>,
}

impl BitMatrix {
    pub fn new(n: usize) -> Self {
        let words = n.div_ceil(64);
        BitMatrix {
            n,
            words,
            bits: vec![0; n * words],
        }
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    pub fn get(&self, i: usize, j: usize) -> bool {
        self.bits[i * self.words + j / 64] >> (j % 64) & 1 == 1
    }

    pub fn set(&mut self, i: usize, j: usize) {
        self.bits[i * self.words + j / 64] |= 1 << (j % 64);
    }

    pub fn row(&self, i: usize) -> &[u64] {
        &self.bits[i * self.words..(i + 1) * self.words]
    }

    pub fn row_ones(&self, i: usize) -> impl Iterator<Item = usize> + '_ {
        ones(self.row(i))
    }

    pub fn count_ones(&self) -> usize {
        self.bits.iter().map(|w| w.count_ones() as usize).sum()
    }

    /// Breadth-first hop counts from `source` (`None` when unreachable);
    /// the source itself gets 0.
    pub fn bfs(&self, source: usize) -> Vec<Option<u32>> {
        let mut dist = vec![None; self.n];
        dist[source] = Some(0);
        let mut visited = vec![0u64; self.words];
        visited[source / 64] |= 1 << (source % 64);
        let mut frontier = vec![source];
        let mut next = vec![0u64; self.words];
        let mut depth = 0;
        while !frontier.is_empty() {
            depth += 1;
            next.iter_mut().for_each(|w| *w = 0);
            for &f in &frontier {
                for (acc, w) in next.iter_mut().zip(self.row(f)) {
                    *acc |= w;
                }
            }
            for (acc, seen) in next.iter_mut().zip(visited.iter_mut()) {
                *acc &= !*seen;
                *seen |= *acc;
            }
            frontier.clear();
            frontier.extend(ones(&next));
            for &v in &frontier {
                dist[v] = Some(depth);
            }
        }
        dist
    }
}

pub fn ones(words: &[u64]) -> impl Iterator<Item = usize> + '_ {
    words.iter().enumerate().flat_map(|(w, &bits)| {
        let mut rest = bits;
        std::iter::from_fn(move || {
            if rest == 0 {
                return None;
            }
            let tz = rest.trailing_zeros() as usize;
            rest &= rest - 1;
            Some(w * 64 + tz)
        })
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn path_bfs() {
        let mut m = BitMatrix::new(70);
        for i in 0..69 {
            m.set(i, i + 1);
            m.set(i + 1, i);
        }
        let d = m.bfs(0);
        assert_eq!(d[69], Some(69));
        assert_eq!(d[0], Some(0));
        assert_eq!(m.row_ones(64).collect::<Vec<_>>(), vec![63, 65]);
        assert_eq!(m.count_ones(), 138);
    }

    #[test]
    fn unreachable_nodes() {
        let mut m = BitMatrix::new(3);
        m.set(0, 1);
        m.set(1, 0);
        assert_eq!(m.bfs(0), vec![Some(0), Some(1), None]);
    }
}
