//! Permutations on 0..n with cycle notation, used to encode square-tiled
//! surfaces and cell complexes.

use crate::error::{Error, Result};

#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Perm {
    map: Vec<usize>,
}

impl Perm {
    pub fn identity(n: usize) -> Self {
        Perm {
            map: (0..n).collect(),
        }
    }

    pub fn from_images(map: Vec<usize>) -> Result<Self> {
        let n = map.len();
        let mut seen = vec![false; n];
        for &v in &map {
            if v >= n || seen[v] {
                return Err(Error::Parse("not a permutation".into()));
            }
            seen[v] = true;
        }
        Ok(Perm { map })
    }

    /// Build from disjoint cycles; elements not mentioned are fixed.
    pub fn from_cycles(n: usize, cycles: &[Vec<usize>]) -> Result<Self> {
        let mut map: Vec<usize> = (0..n).collect();
        let mut touched = vec![false; n];
        for cyc in cycles {
            for i in 0..cyc.len() {
                let a = cyc[i];
                let b = cyc[(i + 1) % cyc.len()];
                if a >= n || b >= n {
                    return Err(Error::Parse(format!("cycle element out of range (n={n})")));
                }
                if touched[a] {
                    return Err(Error::Parse("cycles not disjoint".into()));
                }
                touched[a] = true;
                map[a] = b;
            }
        }
        Ok(Perm { map })
    }

    pub fn len(&self) -> usize {
        self.map.len()
    }

    pub fn is_empty(&self) -> bool {
        self.map.is_empty()
    }

    pub fn apply(&self, i: usize) -> usize {
        self.map[i]
    }

    pub fn inverse(&self) -> Perm {
        let mut inv = vec![0; self.map.len()];
        for (i, &v) in self.map.iter().enumerate() {
            inv[v] = i;
        }
        Perm { map: inv }
    }

    /// `self * rhs`: apply `rhs` first, then `self`.
    pub fn compose(&self, rhs: &Perm) -> Perm {
        assert_eq!(self.len(), rhs.len());
        Perm {
            map: (0..self.len()).map(|i| self.apply(rhs.apply(i))).collect(),
        }
    }

    /// Commutator `self * rhs * self^-1 * rhs^-1`.
    pub fn commutator(&self, rhs: &Perm) -> Perm {
        self.compose(rhs)
            .compose(&self.inverse())
            .compose(&rhs.inverse())
    }

    /// Cycles sorted by minimal element, each starting at its minimum.
    /// Includes fixed points as singleton cycles.
    pub fn cycles(&self) -> Vec<Vec<usize>> {
        let n = self.len();
        let mut seen = vec![false; n];
        let mut out = Vec::new();
        for start in 0..n {
            if seen[start] {
                continue;
            }
            let mut cyc = vec![start];
            seen[start] = true;
            let mut cur = self.apply(start);
            while cur != start {
                seen[cur] = true;
                cyc.push(cur);
                cur = self.apply(cur);
            }
            out.push(cyc);
        }
        out
    }

    /// True if the group generated by the given permutations acts transitively.
    pub fn transitive(perms: &[&Perm]) -> bool {
        if perms.is_empty() {
            return true;
        }
        let n = perms[0].len();
        if n == 0 {
            return true;
        }
        let mut seen = vec![false; n];
        let mut stack = vec![0usize];
        seen[0] = true;
        let mut count = 1;
        while let Some(i) = stack.pop() {
            for p in perms {
                for j in [p.apply(i), p.inverse().apply(i)] {
                    if !seen[j] {
                        seen[j] = true;
                        count += 1;
                        stack.push(j);
                    }
                }
            }
        }
        count == n
    }

    /// Canonical cycle-notation string, e.g. `(0 1)(2)`.
    pub fn cycle_string(&self) -> String {
        self.cycles()
            .iter()
            .map(|c| {
                let inner = c
                    .iter()
                    .map(|x| x.to_string())
                    .collect::<Vec<_>>()
                    .join(" ");
                format!("({inner})")
            })
            .collect()
    }

    /// Parse cycle notation like `(0 1)(2)` or `(0,1)(2)`.
    pub fn parse_cycles(n: usize, s: &str) -> Result<Perm> {
        let s = s.trim();
        let mut cycles = Vec::new();
        let mut rest = s;
        while !rest.is_empty() {
            if !rest.starts_with('(') {
                return Err(Error::Parse(format!("expected ( in cycles: {s}")));
            }
            let close = rest
                .find(')')
                .ok_or_else(|| Error::Parse(format!("missing ) in cycles: {s}")))?;
            let inner = &rest[1..close];
            let cyc: Vec<usize> = inner
                .split(|c: char| c == ',' || c.is_whitespace())
                .filter(|t| !t.is_empty())
                .map(|t| {
                    t.parse::<usize>()
                        .map_err(|_| Error::Parse(format!("bad cycle entry {t}")))
                })
                .collect::<Result<_>>()?;
            if !cyc.is_empty() {
                cycles.push(cyc);
            }
            rest = rest[close + 1..].trim_start();
        }
        Perm::from_cycles(n, &cycles)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn l3_commutator_is_3_cycle() {
        // L3: squares 0,1 side by side, 2 on top of 0
        let r = Perm::from_cycles(3, &[vec![0, 1]]).unwrap();
        let u = Perm::from_cycles(3, &[vec![0, 2]]).unwrap();
        let c = r.commutator(&u);
        let cycles = c.cycles();
        assert_eq!(cycles.len(), 1);
        assert_eq!(cycles[0].len(), 3);
    }

    #[test]
    fn cycle_string_roundtrip() {
        let p = Perm::from_cycles(5, &[vec![0, 3], vec![1, 4, 2]]).unwrap();
        let s = p.cycle_string();
        let q = Perm::parse_cycles(5, &s).unwrap();
        assert_eq!(p, q);
    }

    #[test]
    fn transitivity() {
        let r = Perm::from_cycles(3, &[vec![0, 1]]).unwrap();
        let u = Perm::from_cycles(3, &[vec![0, 2]]).unwrap();
        assert!(Perm::transitive(&[&r, &u]));
        let id = Perm::identity(3);
        assert!(!Perm::transitive(&[&id]));
    }
}
