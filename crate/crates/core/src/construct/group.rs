use super::BuildError;

/// Finite group given by its Cayley table.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CayleyGroup {
    name: String,
    table: Vec<Vec<usize>>,
    identity: usize,
    names: Vec<String>,
}

impl CayleyGroup {
    /// Validates Latin-square shape, associativity, identity and inverses.
    pub fn new(
        name: impl Into<String>,
        table: Vec<Vec<usize>>,
        identity: usize,
        names: Vec<String>,
    ) -> Result<Self, BuildError> {
        let name = name.into();
        let n = table.len();
        let bad = |why: String| BuildError::InvalidGroup(format!("{name}: {why}"));
        if n == 0 || names.len() != n || identity >= n {
            return Err(bad("shape".into()));
        }
        for (a, row) in table.iter().enumerate() {
            if row.len() != n {
                return Err(bad(format!("row {a} has wrong length")));
            }
            let mut seen = vec![false; n];
            for &x in row {
                if x >= n || std::mem::replace(&mut seen[x], true) {
                    return Err(bad(format!("row {a} is not a permutation")));
                }
            }
        }
        for b in 0..n {
            let mut seen = vec![false; n];
            for row in &table {
                if std::mem::replace(&mut seen[row[b]], true) {
                    return Err(bad(format!("column {b} is not a permutation")));
                }
            }
        }
        for a in 0..n {
            if table[identity][a] != a || table[a][identity] != a {
                return Err(bad("identity law fails".into()));
            }
            if !(0..n).any(|b| table[a][b] == identity && table[b][a] == identity) {
                return Err(bad(format!("{} has no inverse", names[a])));
            }
            for b in 0..n {
                for c in 0..n {
                    if table[table[a][b]][c] != table[a][table[b][c]] {
                        return Err(bad(format!("associativity fails on ({}, {}, {})", names[a], names[b], names[c])));
                    }
                }
            }
        }
        Ok(Self { name, table, identity, names })
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn order(&self) -> usize {
        self.table.len()
    }

    pub fn identity(&self) -> usize {
        self.identity
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.names.iter().position(|n| n == name)
    }

    pub fn mul(&self, a: usize, b: usize) -> usize {
        self.table[a][b]
    }

    pub fn is_commutative(&self) -> bool {
        let n = self.order();
        (0..n).all(|a| (0..n).all(|b| self.table[a][b] == self.table[b][a]))
    }
}

/// Builds one of the groups `Q8`, `S3`, `D4`, `C<n>`.
pub fn builtin_group(name: &str) -> Result<CayleyGroup, BuildError> {
    match name {
        "Q8" => quaternion(),
        "S3" => dihedral(3, "S3"),
        "D4" => dihedral(4, "D4"),
        _ => match name.strip_prefix('C').and_then(|n| n.parse::<usize>().ok()) {
            Some(n) if n >= 1 => cyclic(n),
            _ => Err(BuildError::UnknownGroup(name.to_string())),
        },
    }
}

fn quaternion() -> Result<CayleyGroup, BuildError> {
    // Element 2u + s: unit u in {1, i, j, k}, sign s (0 = +, 1 = -).
    const UNIT_MUL: [[(usize, usize); 4]; 4] = [
        [(0, 0), (1, 0), (2, 0), (3, 0)],
        [(1, 0), (0, 1), (3, 0), (2, 1)],
        [(2, 0), (3, 1), (0, 1), (1, 0)],
        [(3, 0), (2, 0), (1, 1), (0, 1)],
    ];
    let units = ["1", "i", "j", "k"];
    let names = (0..8).map(|e| format!("{}{}", if e % 2 == 1 { "-" } else { "" }, units[e / 2])).collect();
    let table = (0..8)
        .map(|a| {
            (0..8)
                .map(|b| {
                    let (u, s) = UNIT_MUL[a / 2][b / 2];
                    2 * u + (s + a % 2 + b % 2) % 2
                })
                .collect()
        })
        .collect();
    CayleyGroup::new("Q8", table, 0, names)
}

fn dihedral(n: usize, name: &str) -> Result<CayleyGroup, BuildError> {
    // Element r^a s^b stored as a + n*b; s r = r^{-1} s.
    let names = (0..2 * n)
        .map(|e| {
            let (a, b) = (e % n, e / n);
            let r = match a {
                0 => String::new(),
                1 => "r".to_string(),
                _ => format!("r{a}"),
            };
            match (r.is_empty(), b) {
                (true, 0) => "e".to_string(),
                (_, 0) => r,
                _ => format!("{r}s"),
            }
        })
        .collect();
    let table = (0..2 * n)
        .map(|x| {
            (0..2 * n)
                .map(|y| {
                    let (a1, b1) = (x % n, x / n);
                    let (a2, b2) = (y % n, y / n);
                    let a2 = if b1 == 1 { (n - a2) % n } else { a2 };
                    (a1 + a2) % n + n * ((b1 + b2) % 2)
                })
                .collect()
        })
        .collect();
    CayleyGroup::new(name, table, 0, names)
}

fn cyclic(n: usize) -> Result<CayleyGroup, BuildError> {
    let names = (0..n)
        .map(|k| match k {
            0 => "e".to_string(),
            1 => "g".to_string(),
            _ => format!("g{k}"),
        })
        .collect();
    let table = (0..n).map(|a| (0..n).map(|b| (a + b) % n).collect()).collect();
    CayleyGroup::new(format!("C{n}"), table, 0, names)
}
