use std::collections::{HashMap, HashSet, VecDeque};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::GroupError;
use crate::words::{GroupPresentation, Letter, Word};

/// Default cap on the number of enumerated elements.
pub const DEFAULT_ENUMERATION_CAP: usize = 512;

/// Upper bound on associativity spot checks for user-supplied tables.
pub const ASSOCIATIVITY_SAMPLES: usize = 100_000;

/// A permutation of `{0, …, n-1}`, stored as its image vector.
pub type Permutation = Vec<usize>;

/// Parses cycle notation over `1..=degree`, e.g. `(1 2 3)(4 5)` or `()`.
pub fn parse_cycles(text: &str, degree: usize) -> Result<Permutation, GroupError> {
    let mut image: Vec<usize> = (0..degree).collect();
    let bad = |msg: &str| GroupError::BadPermutation(format!("{msg} in `{text}`"));
    let mut rest = text.trim();
    while !rest.is_empty() {
        let Some(after_open) = rest.strip_prefix('(') else {
            return Err(bad("expected `(`"));
        };
        let Some(close) = after_open.find(')') else {
            return Err(bad("unclosed cycle"));
        };
        let points: Vec<usize> = after_open[..close]
            .split(|c: char| c.is_whitespace() || c == ',')
            .filter(|s| !s.is_empty())
            .map(|s| s.parse::<usize>().map_err(|_| bad("non-numeric point")))
            .collect::<Result<_, _>>()?;
        for &p in &points {
            if p == 0 || p > degree {
                return Err(bad(&format!("point {p} outside 1..={degree}")));
            }
        }
        let mut seen = HashSet::new();
        if !points.iter().all(|p| seen.insert(*p)) {
            return Err(bad("repeated point in a cycle"));
        }
        // Cycles compose right to left, like functions.
        let mut cycle = (0..degree).collect::<Vec<_>>();
        for (k, &p) in points.iter().enumerate() {
            cycle[p - 1] = points[(k + 1) % points.len()] - 1;
        }
        image = (0..degree).map(|x| image[cycle[x]]).collect();
        rest = after_open[close + 1..].trim_start();
    }
    Ok(image)
}

/// Largest point mentioned in cycle notation (0 for the identity).
pub fn cycle_degree(text: &str) -> usize {
    text.split(|c: char| !c.is_ascii_digit()).filter_map(|s| s.parse::<usize>().ok()).max().unwrap_or(0)
}

fn compose(f: &[usize], g: &[usize]) -> Permutation {
    g.iter().map(|&x| f[x]).collect()
}

/// A finite group given by its multiplication table.
///
/// Element 0 is the identity. `words[g]` is a word in the generators
/// evaluating to `g`, read off a breadth-first spanning tree of the Cayley
/// graph (each element is first reached as `h·s`).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FiniteGroup {
    mul: Vec<Vec<usize>>,
    inv: Vec<usize>,
    generators: Vec<usize>,
    generator_names: Vec<String>,
    permutations: Option<Vec<Permutation>>,
    words: Vec<Word>,
}

impl FiniteGroup {
    /// Breadth-first closure of permutation generators. Elements are ordered by
    /// BFS layer, then lexicographically by image vector.
    pub fn enumerate(names: &[String], generators: &[Permutation], cap: usize) -> Result<Self, GroupError> {
        let degree = generators.first().map_or(0, Vec::len);
        for g in generators {
            if g.len() != degree {
                return Err(GroupError::BadPermutation("generators act on different sets".into()));
            }
            let mut seen = vec![false; degree];
            for &x in g {
                if x >= degree || std::mem::replace(&mut seen[x], true) {
                    return Err(GroupError::BadPermutation("image vector is not a bijection".into()));
                }
            }
        }
        if names.len() != generators.len() {
            return Err(GroupError::BadPermutation("one name per generator required".into()));
        }
        let identity: Permutation = (0..degree).collect();
        let mut elements = vec![identity.clone()];
        let mut words = vec![Word::identity()];
        let mut position: HashMap<Permutation, usize> = HashMap::from([(identity, 0)]);
        let mut layer = vec![0usize];
        while !layer.is_empty() {
            let mut found: Vec<(Permutation, Word)> = Vec::new();
            for &h in &layer {
                for (s, gen) in generators.iter().enumerate() {
                    let p = compose(&elements[h], gen);
                    if position.contains_key(&p) || found.iter().any(|(q, _)| *q == p) {
                        continue;
                    }
                    let w = Word::from_letters(words[h].letters().iter().copied().chain([Letter::new(s, false)]));
                    found.push((p, w));
                }
            }
            found.sort_by(|a, b| a.0.cmp(&b.0));
            layer.clear();
            for (p, w) in found {
                if elements.len() >= cap {
                    return Err(GroupError::CapExceeded { cap, partial: elements.len() + 1 });
                }
                position.insert(p.clone(), elements.len());
                layer.push(elements.len());
                elements.push(p);
                words.push(w);
            }
        }
        let n = elements.len();
        let mul: Vec<Vec<usize>> =
            (0..n).map(|g| (0..n).map(|h| position[&compose(&elements[g], &elements[h])]).collect()).collect();
        let inv = (0..n).map(|g| (0..n).find(|&h| mul[g][h] == 0).expect("group inverse")).collect();
        let generators = generators.iter().map(|g| position[g]).collect();
        Ok(FiniteGroup {
            mul,
            inv,
            generators,
            generator_names: names.to_vec(),
            permutations: Some(elements),
            words,
        })
    }

    /// A group from a user-supplied table with element 0 as identity.
    /// Associativity is spot-checked on `min(n³, 10⁵)` seeded random triples.
    pub fn from_table(names: &[String], table: Vec<Vec<usize>>, generators: Vec<usize>) -> Result<Self, GroupError> {
        let n = table.len();
        if n == 0 || table.iter().any(|r| r.len() != n || r.iter().any(|&x| x >= n)) {
            return Err(GroupError::NotAGroup("table must be square with entries in range".into()));
        }
        if names.len() != generators.len() || generators.iter().any(|&g| g >= n) {
            return Err(GroupError::NotAGroup("bad generator list".into()));
        }
        for g in 0..n {
            if table[0][g] != g || table[g][0] != g {
                return Err(GroupError::NotAGroup("element 0 is not the identity".into()));
            }
        }
        let mut inv = Vec::with_capacity(n);
        for g in 0..n {
            let mut seen = vec![false; n];
            for &x in &table[g] {
                if std::mem::replace(&mut seen[x], true) {
                    return Err(GroupError::NotAGroup(format!("row {g} is not a permutation")));
                }
            }
            let h = (0..n).find(|&h| table[g][h] == 0).expect("row is a permutation");
            if table[h][g] != 0 {
                return Err(GroupError::NotAGroup(format!("element {g} has no two-sided inverse")));
            }
            inv.push(h);
        }
        let triples = (n * n * n).min(ASSOCIATIVITY_SAMPLES);
        let exhaustive = n * n * n <= ASSOCIATIVITY_SAMPLES;
        let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
        for t in 0..triples {
            let (a, b, c) = if exhaustive {
                (t / (n * n), (t / n) % n, t % n)
            } else {
                (rng.gen_range(0..n), rng.gen_range(0..n), rng.gen_range(0..n))
            };
            if table[table[a][b]][c] != table[a][table[b][c]] {
                return Err(GroupError::NotAGroup(format!("({a}·{b})·{c} ≠ {a}·({b}·{c})")));
            }
        }
        let mut words = vec![None; n];
        words[0] = Some(Word::identity());
        let mut queue = VecDeque::from([0usize]);
        let mut reached = 1;
        while let Some(h) = queue.pop_front() {
            for (s, &g) in generators.iter().enumerate() {
                let x = table[h][g];
                if words[x].is_none() {
                    let w: &Word = words[h].as_ref().expect("visited");
                    words[x] = Some(Word::from_letters(w.letters().iter().copied().chain([Letter::new(s, false)])));
                    reached += 1;
                    queue.push_back(x);
                }
            }
        }
        if reached < n {
            return Err(GroupError::NotGenerating { reached, order: n });
        }
        Ok(FiniteGroup {
            mul: table,
            inv,
            generators,
            generator_names: names.to_vec(),
            permutations: None,
            words: words.into_iter().map(|w| w.expect("reached")).collect(),
        })
    }

    pub fn order(&self) -> usize {
        self.mul.len()
    }

    pub fn mul(&self, g: usize, h: usize) -> usize {
        self.mul[g][h]
    }

    pub fn inv(&self, g: usize) -> usize {
        self.inv[g]
    }

    pub fn generators(&self) -> &[usize] {
        &self.generators
    }

    pub fn generator_names(&self) -> &[String] {
        &self.generator_names
    }

    pub fn permutations(&self) -> Option<&[Permutation]> {
        self.permutations.as_deref()
    }

    /// Word in the generators evaluating to element `g`.
    pub fn word(&self, g: usize) -> &Word {
        &self.words[g]
    }

    /// Evaluates a word in the generators.
    pub fn evaluate(&self, w: &Word) -> usize {
        w.letters().iter().fold(0, |acc, l| {
            let s = self.generators[l.generator];
            self.mul(acc, if l.inverse { self.inv(s) } else { s })
        })
    }

    /// Is the order a power of `p`?
    pub fn is_p_group(&self, p: u32) -> bool {
        let mut n = self.order();
        if p < 2 {
            return false;
        }
        while n.is_multiple_of(p as usize) {
            n /= p as usize;
        }
        n == 1
    }

    /// A presentation on the same generators: relators `w(h)·s·w(h·s)⁻¹` for
    /// every element `h` and generator `s`, which define the group because the
    /// words come from a spanning tree of the Cayley graph.
    pub fn presentation(&self) -> GroupPresentation {
        let mut relators = Vec::new();
        let mut seen = HashSet::new();
        for h in 0..self.order() {
            for (s, &g) in self.generators.iter().enumerate() {
                let r = self.words[h].mul(&Word::generator(s)).mul(&self.words[self.mul(h, g)].inverse());
                if !r.is_identity() && seen.insert(r.clone()) {
                    relators.push(r);
                }
            }
        }
        GroupPresentation::new(self.generator_names.clone(), relators).expect("generator names already validated")
    }
}
