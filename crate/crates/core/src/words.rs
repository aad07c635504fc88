//! Free-group words, presentations, Fox derivatives and `Hom(Γ, R)`.
//!
//! Word grammar (whitespace separates terms, juxtaposition also works):
//!
//! ```text
//! word := term+
//! term := atom ('^' signed-integer)?
//! atom := generator-name | '1' | '(' word ')' | '[' word ',' word ']'
//! ```
//!
//! `[u,v]` expands to `u v u^-1 v^-1` and `1` is the identity.

use std::fmt;

use crate::error::WordError;
use crate::field::FieldSpec;
use crate::linalg::{Matrix, Subspace};

/// Largest exponent accepted by the parser.
pub const MAX_EXPONENT: u64 = 1_000_000;

/// Longest word a power may produce in the parser.
pub const MAX_WORD_LEN: usize = 10_000_000;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Letter {
    pub generator: usize,
    pub inverse: bool,
}

impl Letter {
    pub fn new(generator: usize, inverse: bool) -> Self {
        Letter { generator, inverse }
    }

    pub fn inv(self) -> Self {
        Letter { inverse: !self.inverse, ..self }
    }

    pub fn exponent(self) -> i64 {
        if self.inverse {
            -1
        } else {
            1
        }
    }
}

/// A freely reduced word in the generators.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Word {
    letters: Vec<Letter>,
}

impl Word {
    pub fn identity() -> Self {
        Word::default()
    }

    pub fn generator(i: usize) -> Self {
        Word { letters: vec![Letter::new(i, false)] }
    }

    /// Freely reduces `letters`.
    pub fn from_letters(letters: impl IntoIterator<Item = Letter>) -> Self {
        let mut stack: Vec<Letter> = Vec::new();
        for l in letters {
            if stack.last() == Some(&l.inv()) {
                stack.pop();
            } else {
                stack.push(l);
            }
        }
        Word { letters: stack }
    }

    pub fn letters(&self) -> &[Letter] {
        &self.letters
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    pub fn is_identity(&self) -> bool {
        self.letters.is_empty()
    }

    pub fn inverse(&self) -> Word {
        Word { letters: self.letters.iter().rev().map(|l| l.inv()).collect() }
    }

    pub fn mul(&self, other: &Word) -> Word {
        Word::from_letters(self.letters.iter().chain(&other.letters).copied())
    }

    pub fn pow(&self, n: i64) -> Word {
        let mut base = if n < 0 { self.inverse() } else { self.clone() };
        let mut k = n.unsigned_abs();
        let mut out = Word::identity();
        while k > 0 {
            if k & 1 == 1 {
                out = out.mul(&base);
            }
            k >>= 1;
            if k > 0 {
                base = base.mul(&base);
            }
        }
        out
    }

    /// `[u, v] = u v u⁻¹ v⁻¹`.
    pub fn commutator(u: &Word, v: &Word) -> Word {
        u.mul(v).mul(&u.inverse()).mul(&v.inverse())
    }

    pub fn exponent_sum(&self, generator: usize) -> i64 {
        self.letters.iter().filter(|l| l.generator == generator).map(|l| l.exponent()).sum()
    }

    /// Prefix made of the first `k` letters (already reduced).
    pub fn prefix(&self, k: usize) -> Word {
        Word { letters: self.letters[..k].to_vec() }
    }

    pub fn max_generator(&self) -> Option<usize> {
        self.letters.iter().map(|l| l.generator).max()
    }

    /// Renders the word with the given generator names, collapsing runs into powers.
    pub fn display<'a>(&'a self, names: &'a [String]) -> WordDisplay<'a> {
        WordDisplay { word: self, names }
    }
}

pub struct WordDisplay<'a> {
    word: &'a Word,
    names: &'a [String],
}

impl fmt::Display for WordDisplay<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let letters = &self.word.letters;
        if letters.is_empty() {
            return f.write_str("1");
        }
        let mut i = 0;
        let mut first = true;
        while i < letters.len() {
            let l = letters[i];
            let mut j = i;
            while j < letters.len() && letters[j] == l {
                j += 1;
            }
            let run = (j - i) as i64 * l.exponent();
            if !first {
                f.write_str(" ")?;
            }
            first = false;
            let name = &self.names[l.generator];
            if run == 1 {
                write!(f, "{name}")?;
            } else {
                write!(f, "{name}^{run}")?;
            }
            i = j;
        }
        Ok(())
    }
}

/// Parses `text` against the generator names.
pub fn parse_word(text: &str, generators: &[String]) -> Result<Word, WordError> {
    let mut p = Parser { src: text.as_bytes(), pos: 0, generators };
    p.skip_ws();
    let w = p.word(&[])?;
    p.skip_ws();
    if p.pos < p.src.len() {
        return Err(p.error("unexpected character"));
    }
    Ok(w)
}

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
    generators: &'a [String],
}

impl Parser<'_> {
    fn error(&self, msg: &str) -> WordError {
        let found = match self.src.get(self.pos) {
            Some(c) => format!("{msg} `{}`", *c as char),
            None => format!("{msg} (end of input)"),
        };
        WordError::Syntax { pos: self.pos, msg: found }
    }

    fn skip_ws(&mut self) {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&self) -> Option<u8> {
        self.src.get(self.pos).copied()
    }

    /// Parses terms until end of input or one of `stops`.
    fn word(&mut self, stops: &[u8]) -> Result<Word, WordError> {
        let mut letters = Vec::new();
        let mut terms = 0;
        loop {
            self.skip_ws();
            match self.peek() {
                None => break,
                Some(c) if stops.contains(&c) => break,
                _ => {}
            }
            let t = self.term()?;
            letters.extend_from_slice(t.letters());
            terms += 1;
        }
        if terms == 0 {
            return Err(self.error("expected a term"));
        }
        Ok(Word::from_letters(letters))
    }

    fn term(&mut self) -> Result<Word, WordError> {
        let atom = self.atom()?;
        self.skip_ws();
        if self.peek() == Some(b'^') {
            self.pos += 1;
            self.skip_ws();
            let at = self.pos;
            let n = self.signed_integer()?;
            if (atom.len() as u128) * (n.unsigned_abs() as u128) > MAX_WORD_LEN as u128 {
                return Err(WordError::Syntax { pos: at, msg: format!("word longer than {MAX_WORD_LEN} letters") });
            }
            return Ok(atom.pow(n));
        }
        Ok(atom)
    }

    fn signed_integer(&mut self) -> Result<i64, WordError> {
        let start = self.pos;
        if matches!(self.peek(), Some(b'-') | Some(b'+')) {
            self.pos += 1;
        }
        let digits = self.pos;
        while matches!(self.peek(), Some(c) if c.is_ascii_digit()) {
            self.pos += 1;
        }
        if self.pos == digits {
            return Err(self.error("expected an integer exponent, found"));
        }
        let text = std::str::from_utf8(&self.src[start..self.pos]).expect("ascii");
        match text.parse::<i64>() {
            Ok(n) if n.unsigned_abs() <= MAX_EXPONENT => Ok(n),
            _ => Err(WordError::Syntax { pos: start, msg: format!("exponent out of range (|n| <= {MAX_EXPONENT})") }),
        }
    }

    fn expect(&mut self, c: u8) -> Result<(), WordError> {
        self.skip_ws();
        if self.peek() == Some(c) {
            self.pos += 1;
            Ok(())
        } else {
            Err(self.error(&format!("expected `{}`, found", c as char)))
        }
    }

    fn atom(&mut self) -> Result<Word, WordError> {
        match self.peek() {
            Some(b'(') => {
                self.pos += 1;
                let w = self.word(b")")?;
                self.expect(b')')?;
                Ok(w)
            }
            Some(b'[') => {
                self.pos += 1;
                let u = self.word(b",")?;
                self.expect(b',')?;
                let v = self.word(b"]")?;
                self.expect(b']')?;
                Ok(Word::commutator(&u, &v))
            }
            Some(b'1') => {
                self.pos += 1;
                Ok(Word::identity())
            }
            Some(c) if c.is_ascii_alphabetic() || c == b'_' => {
                let start = self.pos;
                while matches!(self.peek(), Some(c) if c.is_ascii_alphanumeric() || c == b'_') {
                    self.pos += 1;
                }
                let name = std::str::from_utf8(&self.src[start..self.pos]).expect("ascii");
                match self.generators.iter().position(|g| g == name) {
                    Some(i) => Ok(Word::generator(i)),
                    None => Err(WordError::UnknownGenerator { name: name.to_string(), pos: start }),
                }
            }
            _ => Err(self.error("expected a generator, `(`, `[` or `1`, found")),
        }
    }
}

fn valid_name(name: &str) -> bool {
    let mut chars = name.chars();
    matches!(chars.next(), Some(c) if c.is_ascii_alphabetic() || c == '_')
        && chars.all(|c| c.is_ascii_alphanumeric() || c == '_')
}

/// Generators and relators, taken verbatim.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GroupPresentation {
    generators: Vec<String>,
    relators: Vec<Word>,
}

impl GroupPresentation {
    pub fn new(generators: Vec<String>, relators: Vec<Word>) -> Result<Self, WordError> {
        for (i, g) in generators.iter().enumerate() {
            if !valid_name(g) {
                return Err(WordError::Syntax { pos: 0, msg: format!("invalid generator name `{g}`") });
            }
            if generators[..i].contains(g) {
                return Err(WordError::DuplicateGenerator(g.clone()));
            }
        }
        for r in &relators {
            if let Some(m) = r.max_generator() {
                if m >= generators.len() {
                    return Err(WordError::GeneratorIndex { index: m, count: generators.len() });
                }
            }
        }
        Ok(GroupPresentation { generators, relators })
    }

    /// Parses relator texts against `generators`.
    pub fn parse(generators: &[&str], relators: &[&str]) -> Result<Self, WordError> {
        let generators: Vec<String> = generators.iter().map(|s| s.to_string()).collect();
        let relators = relators.iter().map(|r| parse_word(r, &generators)).collect::<Result<_, _>>()?;
        Self::new(generators, relators)
    }

    /// The free group on the named generators.
    pub fn free(generators: &[&str]) -> Self {
        Self::parse(generators, &[]).expect("valid generator names")
    }

    pub fn generators(&self) -> &[String] {
        &self.generators
    }

    pub fn num_generators(&self) -> usize {
        self.generators.len()
    }

    pub fn relators(&self) -> &[Word] {
        &self.relators
    }

    pub fn display_word(&self, w: &Word) -> String {
        w.display(&self.generators).to_string()
    }

    pub fn parse_word(&self, text: &str) -> Result<Word, WordError> {
        parse_word(text, &self.generators)
    }
}

/// A formal ℤ[F]-combination `Σ sign·prefix`.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct FoxDerivative {
    pub terms: Vec<(i8, Word)>,
}

impl FoxDerivative {
    /// `Σ sign·ρ(prefix)` where `eval` evaluates words.
    pub fn evaluate(&self, field: FieldSpec, dim: usize, mut eval: impl FnMut(&Word) -> Matrix) -> Matrix {
        let mut acc = Matrix::zeros(field, dim, dim);
        for (sign, w) in &self.terms {
            acc.add_scaled(&field.from_i64(*sign as i64), &eval(w));
        }
        acc
    }
}

/// `∂w/∂s_j`: a letter `s_j` contributes `+prefix`, a letter `s_j⁻¹` contributes
/// `−prefix·s_j⁻¹`.
pub fn fox_derivative(w: &Word, generator: usize) -> FoxDerivative {
    let mut terms = Vec::new();
    for (k, l) in w.letters().iter().enumerate() {
        if l.generator != generator {
            continue;
        }
        if l.inverse {
            terms.push((-1, w.prefix(k + 1)));
        } else {
            terms.push((1, w.prefix(k)));
        }
    }
    FoxDerivative { terms }
}

/// Exponent sums, one row per relator and one column per generator.
pub fn exponent_matrix(pres: &GroupPresentation) -> Vec<Vec<i64>> {
    pres.relators()
        .iter()
        .map(|r| (0..pres.num_generators()).map(|i| r.exponent_sum(i)).collect())
        .collect()
}

/// `Hom(Γ, R)` as the functionals on generators killed by every relator's
/// exponent-sum row.
pub fn hom_space(pres: &GroupPresentation, field: FieldSpec) -> Subspace {
    let n = pres.num_generators();
    let e = exponent_matrix(pres);
    let rows = e.iter().map(|r| r.iter().map(|&x| field.from_i64(x)).collect()).collect();
    let m = Matrix::from_rows(field, n, rows).expect("exponent rows have one entry per generator");
    m.kernel()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn names(xs: &[&str]) -> Vec<String> {
        xs.iter().map(|s| s.to_string()).collect()
    }

    #[test]
    fn parse_examples() {
        let ab = names(&["a", "b"]);
        assert_eq!(parse_word("a b a^-1 b^-1", &ab).unwrap().len(), 4);
        let abcd = names(&["a", "b", "c", "d"]);
        assert_eq!(parse_word("[a,b][c,d]", &abcd).unwrap().len(), 8);
        assert!(parse_word("a a^-1", &ab).unwrap().is_identity());
        assert_eq!(parse_word("(a b)^2", &ab).unwrap(), parse_word("a b a b", &ab).unwrap());
        assert_eq!(parse_word("a^-3", &ab).unwrap().exponent_sum(0), -3);
        assert!(parse_word("1", &ab).unwrap().is_identity());
        assert_eq!(parse_word("[a, b]", &ab).unwrap(), parse_word("a b a^-1 b^-1", &ab).unwrap());
    }

    #[test]
    fn parse_errors_report_positions() {
        let ab = names(&["a", "b"]);
        assert_eq!(
            parse_word("a c", &ab).unwrap_err(),
            WordError::UnknownGenerator { name: "c".into(), pos: 2 }
        );
        assert!(matches!(parse_word("a^", &ab), Err(WordError::Syntax { pos: 2, .. })));
        assert!(matches!(parse_word("(a b", &ab), Err(WordError::Syntax { pos: 4, .. })));
        assert!(matches!(parse_word("", &ab), Err(WordError::Syntax { pos: 0, .. })));
        assert!(matches!(parse_word("[a b]", &ab), Err(WordError::Syntax { .. })));
        assert!(matches!(parse_word("a )", &ab), Err(WordError::Syntax { pos: 2, .. })));
        assert!(matches!(parse_word("a^2000000", &ab), Err(WordError::Syntax { pos: 2, .. })));
        assert!(matches!(parse_word("(a^1000000)^1000", &ab), Err(WordError::Syntax { .. })));
        assert_eq!(parse_word("(a b)^-3", &ab).unwrap().len(), 6);
    }

    #[test]
    fn print_runs() {
        let ab = names(&["a", "b"]);
        let w = parse_word("a a b^-1 b^-1 b^-1 a", &ab).unwrap();
        assert_eq!(w.display(&ab).to_string(), "a^2 b^-3 a");
        assert_eq!(Word::identity().display(&ab).to_string(), "1");
    }

    #[test]
    fn fox_examples() {
        let ab = names(&["a", "b"]);
        let a = parse_word("a", &ab).unwrap();
        assert_eq!(fox_derivative(&a, 0).terms, vec![(1, Word::identity())]);
        let a_inv = parse_word("a^-1", &ab).unwrap();
        assert_eq!(fox_derivative(&a_inv, 0).terms, vec![(-1, a_inv.clone())]);
        let c = parse_word("a b a^-1 b^-1", &ab).unwrap();
        let aba = parse_word("a b a^-1", &ab).unwrap();
        assert_eq!(fox_derivative(&c, 0).terms, vec![(1, Word::identity()), (-1, aba)]);
        assert!(fox_derivative(&Word::identity(), 0).terms.is_empty());
    }

    #[test]
    fn exponent_matrix_examples() {
        let free = GroupPresentation::free(&["a", "b"]);
        assert!(exponent_matrix(&free).is_empty());
        let comm = GroupPresentation::parse(&["a", "b"], &["[a,b]"]).unwrap();
        assert_eq!(exponent_matrix(&comm), vec![vec![0, 0]]);
        let p = GroupPresentation::parse(&["a", "b"], &["a^2 b^-3"]).unwrap();
        assert_eq!(exponent_matrix(&p), vec![vec![2, -3]]);
    }

    #[test]
    fn hom_space_examples() {
        let q = FieldSpec::Rationals;
        assert_eq!(hom_space(&GroupPresentation::free(&["a", "b"]), q).dim(), 2);
        let c5 = GroupPresentation::parse(&["a"], &["a^5"]).unwrap();
        assert_eq!(hom_space(&c5, q).dim(), 0);
        assert_eq!(hom_space(&c5, FieldSpec::Prime(5)).dim(), 1);
        let p = GroupPresentation::parse(&["a", "b"], &["a^2 b^-3"]).unwrap();
        let h = hom_space(&p, q);
        assert_eq!(h.dim(), 1);
        // basis is (3, 2) up to scaling: RREF gives (1, 2/3)
        let b = &h.basis()[0];
        assert_eq!(&b[0] * &q.from_i64(2), &b[1] * &q.from_i64(3));
    }

    #[test]
    fn presentation_validation() {
        assert!(matches!(
            GroupPresentation::parse(&["a", "a"], &[]),
            Err(WordError::DuplicateGenerator(_))
        ));
        assert!(GroupPresentation::parse(&["1x"], &[]).is_err());
    }
}
