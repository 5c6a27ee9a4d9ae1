//! Zhegalkin polynomials (algebraic normal form) and their text syntax.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

/// Accepted syntax, printed with usage errors.
pub const ANF_GRAMMAR: &str = "\
poly  := [const \"^\"] term (\"^\" term)* | const
const := \"0\" | \"1\"
term  := var (\"&\" var)*
var   := \"x\" DIGIT+   (index >= 1; whitespace is ignored)";

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum AnfError {
    #[error("syntax error at offset {pos}: {msg}")]
    Syntax { pos: usize, msg: String },
    #[error("empty formula")]
    EmptyFormula,
}

/// `a ^ C_1 ^ ... ^ C_k` with each `C_i` a conjunction of variables.
///
/// Terms are kept normalized: variables sorted and distinct within a term,
/// equal terms cancelled in pairs, terms in lexicographic order.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct ZhegalkinPoly {
    constant: bool,
    terms: Vec<Vec<u32>>,
}

impl ZhegalkinPoly {
    pub fn new(constant: bool, terms: impl IntoIterator<Item = Vec<u32>>) -> Self {
        let mut parity: BTreeMap<Vec<u32>, bool> = BTreeMap::new();
        for mut t in terms {
            t.sort_unstable();
            t.dedup();
            *parity.entry(t).or_default() ^= true;
        }
        let terms = parity.into_iter().filter(|(_, odd)| *odd).map(|(t, _)| t).collect();
        Self { constant, terms }
    }

    pub fn constant(&self) -> bool {
        self.constant
    }

    pub fn terms(&self) -> &[Vec<u32>] {
        &self.terms
    }

    /// True when every term cancelled and only the constant is left.
    pub fn is_degenerate(&self) -> bool {
        self.terms.is_empty()
    }

    /// Distinct variable indices, ascending.
    pub fn variables(&self) -> Vec<u32> {
        let set: BTreeSet<u32> = self.terms.iter().flatten().copied().collect();
        set.into_iter().collect()
    }

    pub fn eval(&self, x: impl Fn(u32) -> bool) -> bool {
        self.terms.iter().fold(self.constant, |acc, t| acc ^ t.iter().all(|&i| x(i)))
    }
}

impl fmt::Display for ZhegalkinPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts = Vec::new();
        if self.constant || self.terms.is_empty() {
            parts.push(if self.constant { "1".to_string() } else { "0".to_string() });
        }
        for t in &self.terms {
            parts.push(t.iter().map(|i| format!("x{i}")).collect::<Vec<_>>().join("&"));
        }
        f.write_str(&parts.join(" ^ "))
    }
}

struct Lexer<'a> {
    src: &'a [u8],
    pos: usize,
}

impl Lexer<'_> {
    fn skip_ws(&mut self) {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.src.get(self.pos).copied()
    }

    fn err(&self, msg: impl Into<String>) -> AnfError {
        AnfError::Syntax { pos: self.pos, msg: msg.into() }
    }

    fn var(&mut self) -> Result<u32, AnfError> {
        match self.peek() {
            Some(b'x') => self.pos += 1,
            Some(c) => return Err(self.err(format!("expected variable, found {:?}", c as char))),
            None => return Err(self.err("expected variable, found end of input")),
        }
        let start = self.pos;
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(self.err("expected digits after 'x'"));
        }
        let digits = std::str::from_utf8(&self.src[start..self.pos]).expect("ascii digits");
        match digits.parse::<u32>() {
            Ok(0) => Err(AnfError::Syntax { pos: start, msg: "variable indices start at 1".into() }),
            Ok(i) => Ok(i),
            Err(_) => Err(AnfError::Syntax { pos: start, msg: "variable index too large".into() }),
        }
    }

    fn term(&mut self) -> Result<Vec<u32>, AnfError> {
        let mut t = vec![self.var()?];
        while self.peek() == Some(b'&') {
            self.pos += 1;
            t.push(self.var()?);
        }
        Ok(t)
    }
}

pub fn parse_zhegalkin(text: &str) -> Result<ZhegalkinPoly, AnfError> {
    let mut lx = Lexer { src: text.as_bytes(), pos: 0 };
    let mut constant = false;
    let mut terms = Vec::new();
    match lx.peek() {
        None => return Err(AnfError::EmptyFormula),
        Some(c @ (b'0' | b'1')) => {
            lx.pos += 1;
            constant = c == b'1';
            match lx.peek() {
                None => return Ok(ZhegalkinPoly::new(constant, terms)),
                Some(b'^') => lx.pos += 1,
                Some(_) => return Err(lx.err("expected '^' after constant")),
            }
            terms.push(lx.term()?);
        }
        Some(_) => terms.push(lx.term()?),
    }
    loop {
        match lx.peek() {
            None => break,
            Some(b'^') => {
                lx.pos += 1;
                if matches!(lx.peek(), Some(b'0' | b'1')) {
                    return Err(lx.err("a constant may only appear first"));
                }
                terms.push(lx.term()?);
            }
            Some(c) => return Err(lx.err(format!("unexpected {:?}", c as char))),
        }
    }
    Ok(ZhegalkinPoly::new(constant, terms))
}

/// Random non-degenerate polynomial over `x1..=x{vars}` with `k` distinct
/// terms of size `1..=max_t`.
pub fn random_poly(vars: u32, k: usize, max_t: usize, seed: u64) -> ZhegalkinPoly {
    assert!(vars >= 1 && k >= 1 && max_t >= 1);
    let max_t = max_t.min(vars as usize);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut seen = BTreeSet::new();
    let mut attempts = 0;
    while seen.len() < k && attempts < 100 * k {
        attempts += 1;
        let size = rng.gen_range(1..=max_t);
        let picked = rand::seq::index::sample(&mut rng, vars as usize, size);
        let mut t: Vec<u32> = picked.into_iter().map(|i| i as u32 + 1).collect();
        t.sort_unstable();
        seen.insert(t);
    }
    ZhegalkinPoly::new(rng.gen_bool(0.5), seen)
}
