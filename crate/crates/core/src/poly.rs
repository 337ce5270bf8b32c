//! Sparse multivariate polynomials over f64 coefficients.
//!
//! A polynomial in `n` unknowns is a map from multi-indices (exponent
//! vectors) to nonzero coefficients. Terms are kept in graded
//! lexicographic order so iteration, accumulation and formatting are
//! deterministic. Values are immutable after construction; every
//! operation returns a fresh polynomial.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Exponent vector of one term, e.g. `x1^2*x3` in three unknowns is `(2,0,1)`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Monomial(pub Vec<u32>);

impl Monomial {
    pub fn constant(n: usize) -> Self {
        Monomial(vec![0; n])
    }

    /// Sum of the exponents.
    pub fn modulus(&self) -> u32 {
        self.0.iter().sum()
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn is_constant(&self) -> bool {
        self.0.iter().all(|&e| e == 0)
    }

    /// Componentwise sum, the exponent of a monomial product.
    pub fn product_with(&self, other: &Monomial) -> Monomial {
        debug_assert_eq!(self.len(), other.len());
        Monomial(
            self.0
                .iter()
                .zip(&other.0)
                .map(|(a, b)| a + b)
                .collect(),
        )
    }

    pub fn eval(&self, x: &[f64]) -> f64 {
        debug_assert_eq!(x.len(), self.len());
        self.0
            .iter()
            .zip(x)
            .map(|(&e, &v)| v.powi(e as i32))
            .product()
    }
}

/// Graded lexicographic order: lower total degree first, then exponent
/// vectors lexicographically.
impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        self.modulus()
            .cmp(&other.modulus())
            .then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Degree of a polynomial; the zero polynomial gets a distinguished marker
/// rather than a sentinel integer.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Degree {
    NegInfinity,
    Of(u32),
}

impl Degree {
    pub fn as_u32(&self) -> Option<u32> {
        match self {
            Degree::NegInfinity => None,
            Degree::Of(d) => Some(*d),
        }
    }
}

#[derive(Debug, Error, PartialEq)]
pub enum ParseError {
    #[error("syntax error at byte {pos}: {msg}")]
    Syntax { pos: usize, msg: String },
    #[error("exponent overflow at byte {pos}")]
    ExponentOverflow { pos: usize },
    #[error("variable x{index} exceeds the declared count n={n} (at byte {pos})")]
    VariableOutOfRange { index: usize, n: usize, pos: usize },
}

/// Sparse polynomial in `n` unknowns. Stored zero coefficients are never
/// kept, so structural equality is semantic equality of the term maps.
#[derive(Debug, Clone, PartialEq)]
pub struct Polynomial {
    n: usize,
    terms: BTreeMap<Monomial, f64>,
}

impl Polynomial {
    pub fn zero(n: usize) -> Self {
        Polynomial {
            n,
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(n: usize, c: f64) -> Self {
        let mut p = Polynomial::zero(n);
        if c != 0.0 {
            p.terms.insert(Monomial::constant(n), c);
        }
        p
    }

    /// The unknown `x_{i}` (zero-based index).
    pub fn variable(n: usize, i: usize) -> Self {
        assert!(i < n, "variable index out of range");
        let mut exps = vec![0; n];
        exps[i] = 1;
        let mut terms = BTreeMap::new();
        terms.insert(Monomial(exps), 1.0);
        Polynomial { n, terms }
    }

    /// Build from (monomial, coefficient) pairs, merging duplicates and
    /// dropping zeros.
    pub fn from_terms(n: usize, items: impl IntoIterator<Item = (Monomial, f64)>) -> Self {
        let mut p = Polynomial::zero(n);
        for (m, c) in items {
            assert_eq!(m.len(), n, "monomial length must equal variable count");
            p.add_term(m, c);
        }
        p
    }

    fn add_term(&mut self, m: Monomial, c: f64) {
        if c == 0.0 {
            return;
        }
        match self.terms.entry(m) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                let sum = *o.get() + c;
                if sum == 0.0 {
                    o.remove();
                } else {
                    *o.get_mut() = sum;
                }
            }
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    /// Terms in graded lexicographic order.
    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, f64)> {
        self.terms.iter().map(|(m, &c)| (m, c))
    }

    pub fn coeff(&self, m: &Monomial) -> f64 {
        self.terms.get(m).copied().unwrap_or(0.0)
    }

    pub fn degree(&self) -> Degree {
        self.terms
            .keys()
            .map(|m| m.modulus())
            .max()
            .map_or(Degree::NegInfinity, Degree::Of)
    }

    /// Sum of absolute coefficient values.
    pub fn one_norm(&self) -> f64 {
        self.terms.values().map(|c| c.abs()).sum()
    }

    /// Evaluate at a point, accumulating terms in graded-lex order.
    pub fn evaluate(&self, x: &[f64]) -> f64 {
        assert_eq!(x.len(), self.n, "dimension mismatch in evaluate");
        self.terms.iter().map(|(m, c)| c * m.eval(x)).sum()
    }

    /// Evaluate at an integer point.
    pub fn evaluate_int(&self, x: &[i64]) -> f64 {
        let xf: Vec<f64> = x.iter().map(|&v| v as f64).collect();
        self.evaluate(&xf)
    }

    pub fn scale(&self, s: f64) -> Polynomial {
        if s == 0.0 {
            return Polynomial::zero(self.n);
        }
        Polynomial {
            n: self.n,
            terms: self
                .terms
                .iter()
                .map(|(m, c)| (m.clone(), c * s))
                .collect(),
        }
    }

    pub fn add(&self, other: &Polynomial) -> Polynomial {
        assert_eq!(self.n, other.n);
        let mut out = self.clone();
        for (m, c) in other.terms() {
            out.add_term(m.clone(), c);
        }
        out
    }

    pub fn sub(&self, other: &Polynomial) -> Polynomial {
        self.add(&other.scale(-1.0))
    }

    pub fn mul(&self, other: &Polynomial) -> Polynomial {
        assert_eq!(self.n, other.n);
        let mut out = Polynomial::zero(self.n);
        for (ma, ca) in self.terms() {
            for (mb, cb) in other.terms() {
                out.add_term(ma.product_with(mb), ca * cb);
            }
        }
        out
    }

    pub fn square(&self) -> Polynomial {
        self.mul(self)
    }

    /// Homogeneous components `f_0 .. f_d`; empty degrees come back as zero
    /// polynomials so the index is always the degree. Empty for the zero
    /// polynomial.
    pub fn homogeneous_components(&self) -> Vec<Polynomial> {
        let d = match self.degree() {
            Degree::NegInfinity => return Vec::new(),
            Degree::Of(d) => d,
        };
        let mut comps = vec![Polynomial::zero(self.n); d as usize + 1];
        for (m, c) in self.terms() {
            comps[m.modulus() as usize]
                .terms
                .insert(m.clone(), c);
        }
        comps
    }

    /// The homogeneous component of top degree. `None` for the zero
    /// polynomial.
    pub fn leading_form(&self) -> Option<Polynomial> {
        let d = self.degree().as_u32()?;
        let mut lf = Polynomial::zero(self.n);
        for (m, c) in self.terms() {
            if m.modulus() == d {
                lf.terms.insert(m.clone(), c);
            }
        }
        Some(lf)
    }

    /// Substitute the first `r.len()` variables by the given integers,
    /// producing a polynomial in the remaining `n - m` unknowns.
    pub fn fix_prefix(&self, r: &[i64]) -> Polynomial {
        let m = r.len();
        assert!(m <= self.n, "prefix longer than variable count");
        if m == 0 {
            return self.clone();
        }
        let mut out = Polynomial::zero(self.n - m);
        for (mono, c) in self.terms() {
            let mut factor = c;
            for (i, &ri) in r.iter().enumerate() {
                factor *= (ri as f64).powi(mono.0[i] as i32);
            }
            out.add_term(Monomial(mono.0[m..].to_vec()), factor);
        }
        out
    }

    /// Dense expansion of `prod_i (X_i - h_i)^(2*alpha_i)`, the building
    /// block of the shifted-monomial cone. Degree is exactly `2|alpha|`.
    pub fn shifted_monomial(h: &[f64], alpha: &Monomial) -> Polynomial {
        let n = h.len();
        assert_eq!(alpha.len(), n, "shift and exponent length mismatch");
        let mut acc = Polynomial::constant(n, 1.0);
        for i in 0..n {
            let lin = Polynomial::variable(n, i).add(&Polynomial::constant(n, -h[i]));
            for _ in 0..(2 * alpha.0[i]) {
                acc = acc.mul(&lin);
            }
        }
        acc
    }

    /// Parse the term-list grammar (see the module docs of the CLI for the
    /// canonical fixture format): `term (('+'|'-') term)*`, with
    /// `term = [coeff] ['*'] factor ('*' factor)*` and `factor = x<k> ['^' <e>]`.
    /// Variable indices are 1-based; whitespace is insignificant.
    pub fn parse(text: &str, n: usize) -> Result<Polynomial, ParseError> {
        parser::parse(text, n)
    }
}

impl fmt::Display for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        // Highest-degree terms first, the usual mathematical convention.
        for (idx, (m, c)) in self.terms.iter().rev().enumerate() {
            let mag = c.abs();
            if idx == 0 {
                if *c < 0.0 {
                    write!(f, "-")?;
                }
            } else if *c < 0.0 {
                write!(f, " - ")?;
            } else {
                write!(f, " + ")?;
            }
            let mut wrote_coeff = false;
            if mag != 1.0 || m.is_constant() {
                write!(f, "{}", mag)?;
                wrote_coeff = true;
            }
            let mut first_factor = !wrote_coeff;
            for (i, &e) in m.0.iter().enumerate() {
                if e == 0 {
                    continue;
                }
                if !first_factor {
                    write!(f, "*")?;
                }
                first_factor = false;
                write!(f, "x{}", i + 1)?;
                if e > 1 {
                    write!(f, "^{}", e)?;
                }
            }
        }
        Ok(())
    }
}

mod parser {
    use super::{Monomial, ParseError, Polynomial};

    #[derive(Debug, Clone, PartialEq)]
    enum Tok {
        Num(f64),
        Var(usize),
        Star,
        Caret,
        Plus,
        Minus,
        Int(u64),
    }

    struct Lexer<'a> {
        bytes: &'a [u8],
        pos: usize,
    }

    impl<'a> Lexer<'a> {
        fn new(text: &'a str) -> Self {
            Lexer {
                bytes: text.as_bytes(),
                pos: 0,
            }
        }

        fn skip_ws(&mut self) {
            while self.pos < self.bytes.len() && self.bytes[self.pos].is_ascii_whitespace() {
                self.pos += 1;
            }
        }

        fn next(&mut self) -> Result<Option<(usize, Tok)>, ParseError> {
            self.skip_ws();
            if self.pos >= self.bytes.len() {
                return Ok(None);
            }
            let start = self.pos;
            let b = self.bytes[self.pos];
            let tok = match b {
                b'*' => {
                    self.pos += 1;
                    Tok::Star
                }
                b'^' => {
                    self.pos += 1;
                    Tok::Caret
                }
                b'+' => {
                    self.pos += 1;
                    Tok::Plus
                }
                b'-' => {
                    self.pos += 1;
                    Tok::Minus
                }
                b'x' | b'X' => {
                    self.pos += 1;
                    let d = self.read_digits(start)?;
                    Tok::Var(d as usize)
                }
                b'0'..=b'9' | b'.' => self.read_number(start)?,
                other => {
                    return Err(ParseError::Syntax {
                        pos: start,
                        msg: format!("unexpected character '{}'", other as char),
                    })
                }
            };
            Ok(Some((start, tok)))
        }

        fn read_digits(&mut self, at: usize) -> Result<u64, ParseError> {
            let start = self.pos;
            while self.pos < self.bytes.len() && self.bytes[self.pos].is_ascii_digit() {
                self.pos += 1;
            }
            if self.pos == start {
                return Err(ParseError::Syntax {
                    pos: at,
                    msg: "expected digits".into(),
                });
            }
            std::str::from_utf8(&self.bytes[start..self.pos])
                .unwrap()
                .parse::<u64>()
                .map_err(|_| ParseError::ExponentOverflow { pos: at })
        }

        fn read_number(&mut self, start: usize) -> Result<Tok, ParseError> {
            let mut saw_dot = false;
            let mut saw_exp = false;
            let mut is_float = false;
            while self.pos < self.bytes.len() {
                let b = self.bytes[self.pos];
                match b {
                    b'0'..=b'9' => self.pos += 1,
                    b'.' if !saw_dot && !saw_exp => {
                        saw_dot = true;
                        is_float = true;
                        self.pos += 1;
                    }
                    b'e' | b'E' if !saw_exp => {
                        saw_exp = true;
                        is_float = true;
                        self.pos += 1;
                        if self.pos < self.bytes.len()
                            && (self.bytes[self.pos] == b'+' || self.bytes[self.pos] == b'-')
                        {
                            self.pos += 1;
                        }
                    }
                    _ => break,
                }
            }
            let s = std::str::from_utf8(&self.bytes[start..self.pos]).unwrap();
            if is_float {
                let v = s.parse::<f64>().map_err(|_| ParseError::Syntax {
                    pos: start,
                    msg: format!("malformed number '{s}'"),
                })?;
                Ok(Tok::Num(v))
            } else {
                // Keep integers distinguishable so exponents can overflow-check.
                let v = s.parse::<u64>().map_err(|_| ParseError::Syntax {
                    pos: start,
                    msg: format!("malformed integer '{s}'"),
                })?;
                Ok(Tok::Int(v))
            }
        }
    }

    pub fn parse(text: &str, n: usize) -> Result<Polynomial, ParseError> {
        let mut lx = Lexer::new(text);
        let mut toks = Vec::new();
        while let Some(t) = lx.next()? {
            toks.push(t);
        }
        if toks.is_empty() {
            return Err(ParseError::Syntax {
                pos: 0,
                msg: "empty input".into(),
            });
        }
        let mut p = Parser {
            toks,
            idx: 0,
            n,
            end: text.len(),
        };
        p.parse_sum()
    }

    struct Parser {
        toks: Vec<(usize, Tok)>,
        idx: usize,
        n: usize,
        end: usize,
    }

    impl Parser {
        fn peek(&self) -> Option<&(usize, Tok)> {
            self.toks.get(self.idx)
        }

        fn bump(&mut self) -> Option<(usize, Tok)> {
            let t = self.toks.get(self.idx).cloned();
            if t.is_some() {
                self.idx += 1;
            }
            t
        }

        fn here(&self) -> usize {
            self.peek().map_or(self.end, |(p, _)| *p)
        }

        fn parse_sum(&mut self) -> Result<Polynomial, ParseError> {
            let mut acc = Polynomial::zero(self.n);
            let mut sign = 1.0;
            // Optional leading sign.
            match self.peek() {
                Some((_, Tok::Minus)) => {
                    sign = -1.0;
                    self.bump();
                }
                Some((_, Tok::Plus)) => {
                    self.bump();
                }
                _ => {}
            }
            loop {
                let (m, c) = self.parse_term()?;
                acc.add_term(m, sign * c);
                match self.bump() {
                    None => return Ok(acc),
                    Some((_, Tok::Plus)) => sign = 1.0,
                    Some((_, Tok::Minus)) => sign = -1.0,
                    Some((pos, t)) => {
                        return Err(ParseError::Syntax {
                            pos,
                            msg: format!("expected '+' or '-', found {:?}", t),
                        })
                    }
                }
            }
        }

        fn parse_term(&mut self) -> Result<(Monomial, f64), ParseError> {
            let mut coeff = 1.0;
            let mut exps = vec![0u32; self.n];
            let mut saw_any = false;
            match self.peek() {
                Some((_, Tok::Num(_))) | Some((_, Tok::Int(_))) => {
                    let (_, t) = self.bump().unwrap();
                    coeff = match t {
                        Tok::Num(v) => v,
                        Tok::Int(v) => v as f64,
                        _ => unreachable!(),
                    };
                    saw_any = true;
                    if matches!(self.peek(), Some((_, Tok::Star))) {
                        self.bump();
                        self.parse_factor(&mut exps)?;
                    }
                }
                _ => {}
            }
            // Zero or more '*'-separated factors; a bare leading factor is
            // also accepted so that "x1 + x1" parses, but a term may not
            // start with '*'.
            loop {
                match self.peek() {
                    Some((_, Tok::Var(_))) => {
                        self.parse_factor(&mut exps)?;
                        saw_any = true;
                    }
                    Some((pos, Tok::Star)) => {
                        if !saw_any {
                            return Err(ParseError::Syntax {
                                pos: *pos,
                                msg: "term may not start with '*'".into(),
                            });
                        }
                        self.bump();
                        self.parse_factor(&mut exps)?;
                    }
                    _ => break,
                }
            }
            if !saw_any {
                return Err(ParseError::Syntax {
                    pos: self.here(),
                    msg: "expected a term".into(),
                });
            }
            Ok((Monomial(exps), coeff))
        }

        fn parse_factor(&mut self, exps: &mut [u32]) -> Result<(), ParseError> {
            match self.bump() {
                Some((pos, Tok::Var(k))) => {
                    if k == 0 || k > self.n {
                        return Err(ParseError::VariableOutOfRange {
                            index: k,
                            n: self.n,
                            pos,
                        });
                    }
                    let mut e: u64 = 1;
                    if matches!(self.peek(), Some((_, Tok::Caret))) {
                        self.bump();
                        match self.bump() {
                            Some((_, Tok::Int(v))) => e = v,
                            Some((p, t)) => {
                                return Err(ParseError::Syntax {
                                    pos: p,
                                    msg: format!("expected exponent, found {:?}", t),
                                })
                            }
                            None => {
                                return Err(ParseError::Syntax {
                                    pos: self.end,
                                    msg: "expected exponent".into(),
                                })
                            }
                        }
                    }
                    if e > u32::MAX as u64 || exps[k - 1] as u64 + e > u32::MAX as u64 {
                        return Err(ParseError::ExponentOverflow { pos });
                    }
                    exps[k - 1] += e as u32;
                    Ok(())
                }
                Some((pos, t)) => Err(ParseError::Syntax {
                    pos,
                    msg: format!("expected a variable factor, found {:?}", t),
                }),
                None => Err(ParseError::Syntax {
                    pos: self.end,
                    msg: "expected a variable factor".into(),
                }),
            }
        }
    }
}
