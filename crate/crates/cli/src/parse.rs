//! Ideal description files.
//!
//! ```text
//! # comment
//! ring x, y
//! char 0
//! gens x^6, x^5*y^3, x^4*y^4,
//!      x^2*y^8, y^9
//! ```

use std::fmt;
use std::sync::Arc;

use moncore::scalars::{FieldSpec, DEFAULT_PRIME};
use moncore::{ExponentVector, MonomialIdeal, RingContext};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParseError {
    /// 1-based.
    pub line: usize,
    /// 1-based, in characters.
    pub column: usize,
    pub message: String,
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}: {}", self.line, self.column, self.message)
    }
}

impl std::error::Error for ParseError {}

#[derive(Debug, Clone)]
pub struct IdealFile {
    pub ring: Arc<RingContext>,
    pub ideal: MonomialIdeal,
    /// Whether a `char` line was present; otherwise `DEFAULT_PRIME` is used.
    pub char_declared: bool,
}

impl IdealFile {
    /// Same ideal over another characteristic.
    pub fn with_characteristic(&self, c: u64) -> Result<IdealFile, String> {
        let field = FieldSpec::from_characteristic(c).map_err(|_| "characteristic must be 0 or prime".to_string())?;
        let ring = Arc::new(self.ring.as_ref().clone().with_field(field));
        Ok(IdealFile { ideal: self.ideal.with_ring(&ring), ring, char_declared: true })
    }
}

const KEYWORDS: [&str; 4] = ["ring", "char", "weights", "gens"];

/// A cursor over one line; columns are 1-based character positions.
struct Cursor {
    chars: Vec<(usize, char)>,
    pos: usize,
    line: usize,
}

impl Cursor {
    fn new(text: &str, line: usize, start_col: usize) -> Cursor {
        Cursor { chars: text.chars().enumerate().map(|(i, c)| (start_col + i, c)).collect(), pos: 0, line }
    }

    fn column(&self) -> usize {
        self.chars.get(self.pos).map(|(c, _)| *c).unwrap_or_else(|| {
            self.chars.last().map(|(c, _)| c + 1).unwrap_or(1)
        })
    }

    fn error(&self, message: impl Into<String>) -> ParseError {
        ParseError { line: self.line, column: self.column(), message: message.into() }
    }

    fn error_at(&self, column: usize, message: impl Into<String>) -> ParseError {
        ParseError { line: self.line, column, message: message.into() }
    }

    fn skip_space(&mut self) {
        while self.peek().is_some_and(|c| c.is_whitespace()) {
            self.pos += 1;
        }
    }

    fn peek(&self) -> Option<char> {
        self.chars.get(self.pos).map(|(_, c)| *c)
    }

    fn at_end(&mut self) -> bool {
        self.skip_space();
        self.pos >= self.chars.len()
    }

    fn eat(&mut self, c: char) -> bool {
        self.skip_space();
        if self.peek() == Some(c) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn ident(&mut self) -> Result<(usize, String), ParseError> {
        self.skip_space();
        let col = self.column();
        let mut s = String::new();
        while let Some(c) = self.peek() {
            if c.is_ascii_alphabetic() || c == '_' || (!s.is_empty() && c.is_ascii_digit()) {
                s.push(c);
                self.pos += 1;
            } else {
                break;
            }
        }
        if s.is_empty() {
            return Err(self.error("expected a variable name"));
        }
        Ok((col, s))
    }

    fn number(&mut self) -> Result<(usize, u64), ParseError> {
        self.skip_space();
        let col = self.column();
        let mut s = String::new();
        while let Some(c) = self.peek().filter(|c| c.is_ascii_digit()) {
            s.push(c);
            self.pos += 1;
        }
        if s.is_empty() {
            return Err(self.error("expected a nonnegative integer"));
        }
        s.parse().map(|v| (col, v)).map_err(|_| self.error_at(col, "integer too large"))
    }

    fn expect_end_or_comma(&mut self) -> Result<bool, ParseError> {
        if self.at_end() {
            return Ok(false);
        }
        if self.eat(',') {
            return Ok(true);
        }
        Err(self.error(format!("unexpected '{}'", self.peek().unwrap_or(' '))))
    }
}

/// `1 | factor ('*' factor)*` with `factor = name ('^' int)?`.
fn monomial(cur: &mut Cursor, ring: &RingContext) -> Result<ExponentVector, ParseError> {
    let mut e = vec![0u64; ring.dim()];
    cur.skip_space();
    if cur.peek() == Some('1') {
        let (col, v) = cur.number()?;
        if v != 1 {
            return Err(cur.error_at(col, "expected a monomial"));
        }
        return Ok(ExponentVector::new(e));
    }
    loop {
        let (col, name) = cur.ident()?;
        let idx = ring
            .names()
            .iter()
            .position(|n| *n == name)
            .ok_or_else(|| cur.error_at(col, format!("unknown variable '{name}'")))?;
        let k = if cur.eat('^') { cur.number()?.1 } else { 1 };
        e[idx] = e[idx].checked_add(k).ok_or_else(|| cur.error_at(col, "exponent too large"))?;
        if !cur.eat('*') {
            return Ok(ExponentVector::new(e));
        }
    }
}

/// Comma-separated monomials; a trailing comma is allowed.
fn monomial_list(cur: &mut Cursor, ring: &RingContext, out: &mut Vec<ExponentVector>) -> Result<(), ParseError> {
    loop {
        if cur.at_end() {
            return Ok(());
        }
        out.push(monomial(cur, ring)?);
        if !cur.expect_end_or_comma()? {
            return Ok(());
        }
    }
}

/// Parses a comma-separated monomial list such as `x^6, y^9` in `ring`.
pub fn parse_monomials(text: &str, ring: &Arc<RingContext>) -> Result<MonomialIdeal, ParseError> {
    let mut cur = Cursor::new(text, 1, 1);
    let mut gens = Vec::new();
    monomial_list(&mut cur, ring, &mut gens)?;
    if gens.is_empty() {
        return Err(cur.error("empty generator list"));
    }
    Ok(MonomialIdeal::minimalize(ring, gens))
}

pub fn parse_ideal_file(text: &str) -> Result<IdealFile, ParseError> {
    let mut names: Option<(usize, Vec<String>)> = None;
    let mut char_line: Option<u64> = None;
    let mut weights: Option<Vec<u64>> = None;
    let mut gens: Option<(usize, Vec<ExponentVector>)> = None;
    let mut ring: Option<Arc<RingContext>> = None;
    let mut in_gens = false;
    let mut last_line = 1;

    for (i, raw) in text.lines().enumerate() {
        let line_no = i + 1;
        last_line = line_no;
        let content = raw.split('#').next().unwrap_or("");
        let indent = content.chars().take_while(|c| c.is_whitespace()).count();
        let body = &content[content.char_indices().nth(indent).map(|(b, _)| b).unwrap_or(content.len())..];
        if body.trim().is_empty() {
            continue;
        }
        let word: String = body.chars().take_while(|c| c.is_ascii_alphanumeric() || *c == '_').collect();
        let word_end = body.chars().nth(word.chars().count());
        let is_keyword = KEYWORDS.contains(&word.as_str()) && word_end.is_none_or(|c| c.is_whitespace());
        let kw_col = indent + 1;

        if !is_keyword {
            let mut cur = Cursor::new(body, line_no, kw_col);
            if !in_gens {
                return Err(cur.error(format!("expected one of {}", KEYWORDS.join(", "))));
            }
            let ring = ring.as_ref().expect("gens seen after ring");
            let list = &mut gens.as_mut().expect("in gens").1;
            monomial_list(&mut cur, ring, list)?;
            continue;
        }
        in_gens = false;
        let payload = &body[word.len()..];
        let mut cur = Cursor::new(payload, line_no, kw_col + word.len());
        let err_kw = |m: String| ParseError { line: line_no, column: kw_col, message: m };
        match word.as_str() {
            "ring" => {
                if names.is_some() {
                    return Err(err_kw("duplicate ring line".into()));
                }
                let mut vars: Vec<String> = Vec::new();
                loop {
                    let (col, v) = cur.ident()?;
                    if KEYWORDS.contains(&v.as_str()) {
                        return Err(cur.error_at(col, format!("'{v}' is reserved")));
                    }
                    if vars.contains(&v) {
                        return Err(cur.error_at(col, format!("duplicate variable '{v}'")));
                    }
                    vars.push(v);
                    if !cur.expect_end_or_comma()? {
                        break;
                    }
                }
                names = Some((line_no, vars));
            }
            "char" => {
                if char_line.is_some() {
                    return Err(err_kw("duplicate char line".into()));
                }
                let (col, c) = cur.number()?;
                if !cur.at_end() {
                    return Err(cur.error("unexpected text after characteristic"));
                }
                if FieldSpec::from_characteristic(c).is_err() {
                    return Err(cur.error_at(col, "characteristic must be 0 or prime"));
                }
                char_line = Some(c);
            }
            "weights" => {
                if weights.is_some() {
                    return Err(err_kw("duplicate weights line".into()));
                }
                let Some((_, vars)) = &names else {
                    return Err(err_kw("weights before ring".into()));
                };
                let mut w = Vec::new();
                loop {
                    let (col, v) = cur.number()?;
                    if v == 0 {
                        return Err(cur.error_at(col, "weights must be positive"));
                    }
                    w.push(v);
                    if !cur.expect_end_or_comma()? {
                        break;
                    }
                }
                if w.len() != vars.len() {
                    return Err(err_kw(format!("{} weights for {} variables", w.len(), vars.len())));
                }
                weights = Some(w);
            }
            "gens" => {
                if gens.is_some() {
                    return Err(err_kw("duplicate gens line".into()));
                }
                let Some((_, vars)) = &names else {
                    return Err(err_kw("gens before ring".into()));
                };
                // The field is fixed once all lines are read; parse against
                // the names only.
                let r = Arc::new(RingContext::new(vars.clone(), FieldSpec::Rational).map_err(|e| err_kw(e.to_string()))?);
                let mut list = Vec::new();
                monomial_list(&mut cur, &r, &mut list)?;
                ring = Some(r);
                gens = Some((line_no, list));
                in_gens = true;
            }
            _ => unreachable!("keyword list"),
        }
    }

    let Some((_, vars)) = names else {
        return Err(ParseError { line: last_line, column: 1, message: "missing ring line".into() });
    };
    let Some((gens_line, list)) = gens else {
        return Err(ParseError { line: last_line, column: 1, message: "missing gens line".into() });
    };
    if list.is_empty() {
        return Err(ParseError { line: gens_line, column: 1, message: "empty gens".into() });
    }
    let field = FieldSpec::from_characteristic(char_line.unwrap_or(DEFAULT_PRIME)).expect("checked above");
    let mut ctx = RingContext::new(vars, field).expect("names checked above");
    if let Some(w) = weights {
        ctx = ctx.with_weights(w).expect("weights checked above");
    }
    let ring = Arc::new(ctx);
    let ideal = MonomialIdeal::minimalize(&ring, list);
    Ok(IdealFile { ring, ideal, char_declared: char_line.is_some() })
}

/// An ideal file describing `ideal`; parses back to an equal ideal.
pub fn render_ideal_file(ideal: &MonomialIdeal) -> String {
    let ring = ideal.ring();
    let mut out = format!("ring {}\nchar {}\n", ring.names().join(", "), ring.field().characteristic());
    if let Some(w) = ring.weights() {
        let w: Vec<String> = w.iter().map(|v| v.to_string()).collect();
        out.push_str(&format!("weights {}\n", w.join(", ")));
    }
    out.push_str(&format!("gens {}\n", ideal.format_gens().join(", ")));
    out
}
