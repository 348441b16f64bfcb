//! Finite groups given by multiplication tables.

use std::collections::{HashMap, VecDeque};

use crate::error::{Error, Result};

/// Default bound on group orders accepted by the constructors that take external input.
pub const DEFAULT_ORDER_BOUND: usize = 64;

/// A finite group stored as its Cayley table; element 0 is the identity.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FiniteGroup {
    name: String,
    table: Vec<Vec<usize>>,
    inverse: Vec<usize>,
}

impl FiniteGroup {
    /// Validate a Cayley table (`table[g][h] = g·h`, identity at index 0).
    pub fn from_table(name: impl Into<String>, table: Vec<Vec<usize>>) -> Result<Self> {
        let n = table.len();
        if n == 0 {
            return Err(Error::NotAGroup("empty table".into()));
        }
        for (g, row) in table.iter().enumerate() {
            if row.len() != n {
                return Err(Error::NotAGroup(format!(
                    "row {g} has {} entries, expected {n}",
                    row.len()
                )));
            }
            if let Some(&bad) = row.iter().find(|&&x| x >= n) {
                return Err(Error::NotAGroup(format!(
                    "entry {bad} in row {g} is out of range"
                )));
            }
        }
        for g in 0..n {
            if table[0][g] != g || table[g][0] != g {
                return Err(Error::NotAGroup(format!(
                    "index 0 is not a two-sided identity (fails at element {g})"
                )));
            }
        }
        let mut inverse = vec![usize::MAX; n];
        for g in 0..n {
            let Some(h) = (0..n).find(|&h| table[g][h] == 0) else {
                return Err(Error::NotAGroup(format!(
                    "element {g} has no right inverse"
                )));
            };
            if table[h][g] != 0 {
                return Err(Error::NotAGroup(format!(
                    "right inverse of {g} is not a left inverse"
                )));
            }
            inverse[g] = h;
        }
        for a in 0..n {
            for b in 0..n {
                let ab = table[a][b];
                for c in 0..n {
                    if table[ab][c] != table[a][table[b][c]] {
                        return Err(Error::NotAGroup(format!(
                            "associativity fails at ({a}, {b}, {c})"
                        )));
                    }
                }
            }
        }
        Ok(Self {
            name: name.into(),
            table,
            inverse,
        })
    }

    pub fn with_bound(self, bound: usize) -> Result<Self> {
        if self.order() > bound {
            return Err(Error::GroupTooLarge {
                order: self.order(),
                bound,
            });
        }
        Ok(self)
    }

    /// Parse a Cayley table in CSV form: row `g`, column `h` holds the index of `g·h`.
    pub fn from_cayley_csv(name: impl Into<String>, text: &str) -> Result<Self> {
        let mut table = Vec::new();
        for (lineno, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let row = line
                .split(',')
                .map(|t| {
                    t.trim().parse::<usize>().map_err(|e| {
                        Error::Parse(format!("line {}: {:?}: {e}", lineno + 1, t.trim()))
                    })
                })
                .collect::<Result<Vec<_>>>()?;
            table.push(row);
        }
        Self::from_table(name, table)
    }

    /// Close a set of permutations (one-line notation, 0-indexed images) under composition.
    /// Elements are enumerated breadth-first from the identity; the product is `(g·h)(x) = g(h(x))`.
    pub fn from_permutations(
        name: impl Into<String>,
        generators: &[Vec<usize>],
        bound: usize,
    ) -> Result<Self> {
        let degree = generators.first().map_or(0, |g| g.len());
        for g in generators {
            if g.len() != degree {
                return Err(Error::NotAGroup("generators act on different sets".into()));
            }
            let mut seen = vec![false; degree];
            for &x in g {
                if x >= degree || seen[x] {
                    return Err(Error::NotAGroup(format!("{g:?} is not a permutation")));
                }
                seen[x] = true;
            }
        }
        let identity: Vec<usize> = (0..degree).collect();
        let compose =
            |g: &[usize], h: &[usize]| -> Vec<usize> { h.iter().map(|&x| g[x]).collect() };
        let mut elements = vec![identity.clone()];
        let mut index: HashMap<Vec<usize>, usize> = HashMap::from([(identity, 0)]);
        let mut queue = VecDeque::from([0usize]);
        while let Some(i) = queue.pop_front() {
            for g in generators {
                let p = compose(&elements[i], g);
                if !index.contains_key(&p) {
                    if elements.len() >= bound {
                        return Err(Error::GroupTooLarge {
                            order: elements.len() + 1,
                            bound,
                        });
                    }
                    index.insert(p.clone(), elements.len());
                    queue.push_back(elements.len());
                    elements.push(p);
                }
            }
        }
        let table = elements
            .iter()
            .map(|g| elements.iter().map(|h| index[&compose(g, h)]).collect())
            .collect();
        Self::from_table(name, table)
    }

    /// Parse permutation generators, one per line, images separated by whitespace or commas.
    pub fn from_permutation_text(
        name: impl Into<String>,
        text: &str,
        bound: usize,
    ) -> Result<Self> {
        let mut gens = Vec::new();
        for (lineno, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let perm = line
                .split(|c: char| c == ',' || c.is_whitespace())
                .filter(|t| !t.is_empty())
                .map(|t| {
                    t.parse::<usize>()
                        .map_err(|e| Error::Parse(format!("line {}: {t:?}: {e}", lineno + 1)))
                })
                .collect::<Result<Vec<_>>>()?;
            gens.push(perm);
        }
        if gens.is_empty() {
            return Err(Error::Parse("no generators found".into()));
        }
        Self::from_permutations(name, &gens, bound)
    }

    /// `ℤ_n`.
    pub fn cyclic(n: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::NotAGroup("cyclic group of order 0".into()));
        }
        let table = (0..n)
            .map(|a| (0..n).map(|b| (a + b) % n).collect())
            .collect();
        Self::from_table(format!("Z{n}"), table)
    }

    /// Dihedral group of order `2n` (symmetries of the regular `n`-gon).
    /// Element `r^k s^e` has index `k + n·e`.
    pub fn dihedral(n: usize) -> Result<Self> {
        if n < 2 {
            return Err(Error::NotAGroup("dihedral groups need n ≥ 2".into()));
        }
        let idx = |k: usize, e: usize| k % n + n * e;
        let mut table = vec![vec![0; 2 * n]; 2 * n];
        for e1 in 0..2 {
            for k1 in 0..n {
                for e2 in 0..2 {
                    for k2 in 0..n {
                        // r^k1 s^e1 r^k2 s^e2 = r^(k1 ± k2) s^(e1+e2)
                        let k = if e1 == 0 { k1 + k2 } else { k1 + n - k2 };
                        table[idx(k1, e1)][idx(k2, e2)] = idx(k, (e1 + e2) % 2);
                    }
                }
            }
        }
        Self::from_table(format!("D{n}"), table)
    }

    /// Symmetric group on `n` letters, generated by a transposition and an `n`-cycle.
    pub fn symmetric(n: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::NotAGroup("symmetric group on 0 letters".into()));
        }
        if n == 1 {
            return Self::cyclic(1).map(|g| g.renamed("S1"));
        }
        let mut transposition: Vec<usize> = (0..n).collect();
        transposition.swap(0, 1);
        let cycle: Vec<usize> = (0..n).map(|i| (i + 1) % n).collect();
        let order: usize = (1..=n).product();
        Self::from_permutations(format!("S{n}"), &[transposition, cycle], order)
    }

    /// Parse names such as `Z4`, `C4`, `D4`, `S3`.
    pub fn from_name(name: &str) -> Result<Self> {
        let name = name.trim();
        let (kind, num) = name.split_at(
            name.find(|c: char| c.is_ascii_digit())
                .unwrap_or(name.len()),
        );
        let n: usize = num
            .parse()
            .map_err(|_| Error::Parse(format!("unrecognised group name {name:?}")))?;
        match kind.to_ascii_uppercase().as_str() {
            "Z" | "C" => Self::cyclic(n),
            "D" => Self::dihedral(n),
            "S" => {
                if n > 5 {
                    return Err(Error::GroupTooLarge {
                        order: (1..=n).product(),
                        bound: 120,
                    });
                }
                Self::symmetric(n)
            }
            _ => Err(Error::Parse(format!("unrecognised group name {name:?}"))),
        }
    }

    pub fn renamed(mut self, name: impl Into<String>) -> Self {
        self.name = name.into();
        self
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn order(&self) -> usize {
        self.table.len()
    }

    pub fn mul(&self, g: usize, h: usize) -> usize {
        self.table[g][h]
    }

    pub fn inv(&self, g: usize) -> usize {
        self.inverse[g]
    }

    pub fn table(&self) -> &[Vec<usize>] {
        &self.table
    }

    pub fn is_abelian(&self) -> bool {
        (0..self.order()).all(|g| (0..self.order()).all(|h| self.mul(g, h) == self.mul(h, g)))
    }

    /// Conjugacy classes, each sorted, listed by smallest element.
    pub fn conjugacy_classes(&self) -> Vec<Vec<usize>> {
        let n = self.order();
        let mut seen = vec![false; n];
        let mut classes = Vec::new();
        for g in 0..n {
            if seen[g] {
                continue;
            }
            let mut class: Vec<usize> = (0..n)
                .map(|h| self.mul(self.mul(h, g), self.inv(h)))
                .collect();
            class.sort_unstable();
            class.dedup();
            for &x in &class {
                seen[x] = true;
            }
            classes.push(class);
        }
        classes
    }

    /// Centre of the group.
    pub fn centre(&self) -> Vec<usize> {
        (0..self.order())
            .filter(|&g| (0..self.order()).all(|h| self.mul(g, h) == self.mul(h, g)))
            .collect()
    }
}
