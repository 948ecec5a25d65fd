//! Expression and model-file parsing.
//!
//! Polynomial expressions follow a small grammar with explicit
//! multiplication and nonnegative integer exponents:
//!
//! ```text
//! expr   := term (('+' | '-') term)*
//! term   := factor ('*' factor)*
//! factor := '-' factor | base ('^' nat)?
//! base   := nat | name | '(' expr ')'
//! ```
//!
//! Coefficients are integers; rationals only arise from arithmetic,
//! never from literals. Every error carries the byte offset it was
//! detected at.
//!
//! A model file is a JSON document declaring the variables, the
//! (t+1) x t polynomial matrix and optional analysis options:
//!
//! ```json
//! {
//!   "variables": ["v", "w", "x", "y", "z"],
//!   "matrix": [["v", "x"], ["w", "y"], ["-2*x*y", "v^2+w^2+z^2"]],
//!   "options": {"seed": 1, "max_degree": 24}
//! }
//! ```

use crate::poly::{Polynomial, Rational, Vars};
use num_bigint::BigInt;
use serde::Deserialize;
use thiserror::Error;

/// Variable names reserved for coordinates the analysis introduces:
/// the two affine chart coordinates and the perturbation parameter.
pub const RESERVED_NAMES: [&str; 3] = ["s", "t", "delta"];

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ParseError {
    #[error("syntax error at byte {offset}: {message}")]
    Syntax { offset: usize, message: String },
    #[error("unknown variable `{name}` at byte {offset}")]
    UnknownVariable { name: String, offset: usize },
    #[error("negative exponent at byte {offset}")]
    NegativeExponent { offset: usize },
    #[error("exponent too large at byte {offset}")]
    ExponentOverflow { offset: usize },
    #[error("model file: {0}")]
    Model(String),
    #[error("model file at matrix[{row}][{col}]: {source}")]
    Entry {
        row: usize,
        col: usize,
        source: Box<ParseError>,
    },
}

#[derive(Debug, Clone, PartialEq, Eq)]
enum Token {
    Int(BigInt),
    Name(String),
    Plus,
    Minus,
    Star,
    Caret,
    LParen,
    RParen,
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

    /// Next token and its starting byte offset; `None` at end of input.
    fn next(&mut self) -> Result<Option<(Token, usize)>, ParseError> {
        self.skip_ws();
        if self.pos >= self.bytes.len() {
            return Ok(None);
        }
        let start = self.pos;
        let b = self.bytes[self.pos];
        let tok = match b {
            b'+' => {
                self.pos += 1;
                Token::Plus
            }
            b'-' => {
                self.pos += 1;
                Token::Minus
            }
            b'*' => {
                self.pos += 1;
                Token::Star
            }
            b'^' => {
                self.pos += 1;
                Token::Caret
            }
            b'(' => {
                self.pos += 1;
                Token::LParen
            }
            b')' => {
                self.pos += 1;
                Token::RParen
            }
            b'0'..=b'9' => {
                let mut end = self.pos;
                while end < self.bytes.len() && self.bytes[end].is_ascii_digit() {
                    end += 1;
                }
                let text = std::str::from_utf8(&self.bytes[self.pos..end]).unwrap();
                self.pos = end;
                Token::Int(text.parse().unwrap())
            }
            b'a'..=b'z' | b'A'..=b'Z' | b'_' => {
                let mut end = self.pos;
                while end < self.bytes.len()
                    && (self.bytes[end].is_ascii_alphanumeric() || self.bytes[end] == b'_')
                {
                    end += 1;
                }
                let text = std::str::from_utf8(&self.bytes[self.pos..end]).unwrap();
                self.pos = end;
                Token::Name(text.to_string())
            }
            other => {
                return Err(ParseError::Syntax {
                    offset: start,
                    message: format!("unexpected character `{}`", other as char),
                })
            }
        };
        Ok(Some((tok, start)))
    }
}

struct Parser<'a> {
    tokens: Vec<(Token, usize)>,
    cursor: usize,
    end_offset: usize,
    vars: &'a Vars,
}

impl<'a> Parser<'a> {
    fn peek(&self) -> Option<&(Token, usize)> {
        self.tokens.get(self.cursor)
    }

    fn advance(&mut self) -> Option<(Token, usize)> {
        let t = self.tokens.get(self.cursor).cloned();
        if t.is_some() {
            self.cursor += 1;
        }
        t
    }

    fn here(&self) -> usize {
        self.peek().map(|(_, o)| *o).unwrap_or(self.end_offset)
    }

    fn expr(&mut self) -> Result<Polynomial, ParseError> {
        let mut acc = self.term()?;
        while let Some((tok, _)) = self.peek() {
            match tok {
                Token::Plus => {
                    self.advance();
                    let rhs = self.term()?;
                    acc = acc.checked_add(&rhs).expect("same context");
                }
                Token::Minus => {
                    self.advance();
                    let rhs = self.term()?;
                    acc = acc.checked_sub(&rhs).expect("same context");
                }
                _ => break,
            }
        }
        Ok(acc)
    }

    fn term(&mut self) -> Result<Polynomial, ParseError> {
        let mut acc = self.factor()?;
        while let Some((Token::Star, _)) = self.peek() {
            self.advance();
            let rhs = self.factor()?;
            acc = acc.checked_mul(&rhs).expect("same context");
        }
        Ok(acc)
    }

    fn factor(&mut self) -> Result<Polynomial, ParseError> {
        if let Some((Token::Minus, _)) = self.peek() {
            self.advance();
            let inner = self.factor()?;
            return Ok(inner.neg());
        }
        let base = self.base()?;
        if let Some((Token::Caret, _)) = self.peek() {
            self.advance();
            let offset = self.here();
            match self.advance() {
                Some((Token::Int(n), _)) => {
                    let exp = u32::try_from(&n).map_err(|_| ParseError::ExponentOverflow {
                        offset,
                    })?;
                    if exp > 1 << 20 {
                        return Err(ParseError::ExponentOverflow { offset });
                    }
                    return Ok(base.pow(exp));
                }
                Some((Token::Minus, o)) => return Err(ParseError::NegativeExponent { offset: o }),
                _ => {
                    return Err(ParseError::Syntax {
                        offset,
                        message: "expected a nonnegative integer exponent".to_string(),
                    })
                }
            }
        }
        Ok(base)
    }

    fn base(&mut self) -> Result<Polynomial, ParseError> {
        let offset = self.here();
        match self.advance() {
            Some((Token::Int(n), _)) => Ok(Polynomial::constant(
                self.vars,
                Rational::from_integer(n),
            )),
            Some((Token::Name(name), o)) => Polynomial::variable(self.vars, &name)
                .map_err(|_| ParseError::UnknownVariable { name, offset: o }),
            Some((Token::LParen, o)) => {
                let inner = self.expr()?;
                match self.advance() {
                    Some((Token::RParen, _)) => Ok(inner),
                    _ => Err(ParseError::Syntax {
                        offset: o,
                        message: "unbalanced parenthesis".to_string(),
                    }),
                }
            }
            _ => Err(ParseError::Syntax {
                offset,
                message: "expected a number, variable or parenthesized expression".to_string(),
            }),
        }
    }
}

/// Parse one polynomial expression over the given variables.
pub fn parse_poly(text: &str, vars: &Vars) -> Result<Polynomial, ParseError> {
    let mut lexer = Lexer::new(text);
    let mut tokens = Vec::new();
    while let Some(t) = lexer.next()? {
        tokens.push(t);
    }
    let mut parser = Parser {
        tokens,
        cursor: 0,
        end_offset: text.len(),
        vars,
    };
    let poly = parser.expr()?;
    if let Some((_, offset)) = parser.peek() {
        return Err(ParseError::Syntax {
            offset: *offset,
            message: "expected an operator".to_string(),
        });
    }
    Ok(poly)
}

/// Analysis options carried by a model file. Command line flags
/// override these; both fall back to the same defaults.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ModelOptions {
    pub seed: u64,
    pub max_degree: u32,
    pub dimension_hint: Option<u32>,
}

impl Default for ModelOptions {
    fn default() -> Self {
        ModelOptions {
            seed: 1,
            max_degree: 24,
            dimension_hint: None,
        }
    }
}

/// A parsed model file: the declared variables, the polynomial matrix
/// with one more row than columns, and options.
#[derive(Debug, Clone)]
pub struct ModelFile {
    pub vars: Vars,
    pub matrix: Vec<Vec<Polynomial>>,
    pub options: ModelOptions,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct ModelJson {
    variables: Vec<String>,
    matrix: Vec<Vec<String>>,
    #[serde(default)]
    options: OptionsJson,
}

#[derive(Deserialize, Default)]
#[serde(deny_unknown_fields)]
struct OptionsJson {
    seed: Option<u64>,
    max_degree: Option<u32>,
    dimension_hint: Option<u32>,
}

/// Parse and shape-check a JSON model file.
///
/// The matrix must be rectangular with exactly one more row than
/// columns, and exactly two columns: the analysis is specific to
/// Cohen-Macaulay type 2, so wider matrices are rejected here rather
/// than failing later with a worse message.
pub fn parse_model(text: &str) -> Result<ModelFile, ParseError> {
    let json: ModelJson = serde_json::from_str(text)
        .map_err(|e| ParseError::Model(format!("invalid JSON: {e}")))?;
    if json.variables.is_empty() {
        return Err(ParseError::Model("no variables declared".to_string()));
    }
    for name in &json.variables {
        if RESERVED_NAMES.contains(&name.as_str()) {
            return Err(ParseError::Model(format!(
                "variable name `{name}` is reserved for analysis coordinates"
            )));
        }
    }
    let vars = Vars::from_names(json.variables)
        .map_err(|e| ParseError::Model(e.to_string()))?;
    let rows = json.matrix.len();
    if rows == 0 {
        return Err(ParseError::Model("empty matrix".to_string()));
    }
    let cols = json.matrix[0].len();
    for (r, row) in json.matrix.iter().enumerate() {
        if row.len() != cols {
            return Err(ParseError::Model(format!(
                "matrix is not rectangular: row {r} has {} entries, row 0 has {cols}",
                row.len()
            )));
        }
    }
    if rows != cols + 1 {
        return Err(ParseError::Model(format!(
            "matrix must have exactly one more row than columns, got {rows} x {cols}"
        )));
    }
    if cols != 2 {
        return Err(ParseError::Model(format!(
            "only 3 x 2 matrices (Cohen-Macaulay type 2) are supported, got {rows} x {cols}"
        )));
    }
    let mut matrix = Vec::with_capacity(rows);
    for (r, row) in json.matrix.iter().enumerate() {
        let mut out = Vec::with_capacity(cols);
        for (c, entry) in row.iter().enumerate() {
            let poly = parse_poly(entry, &vars).map_err(|e| ParseError::Entry {
                row: r,
                col: c,
                source: Box::new(e),
            })?;
            out.push(poly);
        }
        matrix.push(out);
    }
    let defaults = ModelOptions::default();
    let options = ModelOptions {
        seed: json.options.seed.unwrap_or(defaults.seed),
        max_degree: json.options.max_degree.unwrap_or(defaults.max_degree),
        dimension_hint: json.options.dimension_hint,
    };
    Ok(ModelFile {
        vars,
        matrix,
        options,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::rat;

    fn vars() -> Vars {
        Vars::new(&["v", "w", "x", "y", "z"]).unwrap()
    }

    #[test]
    fn parses_matrix_entries() {
        let v = vars();
        let p = parse_poly("v^2+w^2+z^2", &v).unwrap();
        assert_eq!(p.num_terms(), 3);
        assert_eq!(p.total_degree(), Some(2));
        let q = parse_poly("-2*x*y", &v).unwrap();
        assert_eq!(q.to_string(), "-2*x*y");
    }

    #[test]
    fn unary_minus_binds_looser_than_power() {
        let v = Vars::new(&["x"]).unwrap();
        let p = parse_poly("-x^2", &v).unwrap();
        let q = parse_poly("0-x^2", &v).unwrap();
        assert_eq!(p, q);
    }

    #[test]
    fn integer_arithmetic_in_literals() {
        let v = Vars::new(&["x"]).unwrap();
        let p = parse_poly("2^3+x*0", &v).unwrap();
        assert_eq!(p.constant_value(), Some(rat(8)));
    }

    #[test]
    fn rejects_implicit_multiplication() {
        let v = Vars::new(&["x"]).unwrap();
        let err = parse_poly("2x", &v).unwrap_err();
        assert_eq!(
            err,
            ParseError::Syntax {
                offset: 1,
                message: "expected an operator".to_string()
            }
        );
    }

    #[test]
    fn rejects_negative_exponent_with_offset() {
        let v = Vars::new(&["x"]).unwrap();
        let err = parse_poly("x^-2", &v).unwrap_err();
        assert_eq!(err, ParseError::NegativeExponent { offset: 2 });
    }

    #[test]
    fn unknown_variable_carries_offset() {
        let v = vars();
        let err = parse_poly("v+q", &v).unwrap_err();
        assert_eq!(
            err,
            ParseError::UnknownVariable {
                name: "q".to_string(),
                offset: 2
            }
        );
    }

    #[test]
    fn unbalanced_parenthesis() {
        let v = Vars::new(&["x"]).unwrap();
        assert!(matches!(
            parse_poly("(x+1", &v),
            Err(ParseError::Syntax { offset: 0, .. })
        ));
    }

    #[test]
    fn empty_input_is_a_syntax_error() {
        let v = Vars::new(&["x"]).unwrap();
        assert!(matches!(
            parse_poly("", &v),
            Err(ParseError::Syntax { offset: 0, .. })
        ));
    }

    const PAPER_MODEL: &str = r#"{
        "variables": ["v", "w", "x", "y", "z"],
        "matrix": [["v", "x"], ["w", "y"], ["-2*x*y", "v^2+w^2+z^2"]],
        "options": {"seed": 1, "max_degree": 24}
    }"#;

    #[test]
    fn parses_model_file() {
        let model = parse_model(PAPER_MODEL).unwrap();
        assert_eq!(model.vars.len(), 5);
        assert_eq!(model.matrix.len(), 3);
        assert_eq!(model.matrix[0].len(), 2);
        assert_eq!(model.options.seed, 1);
        assert_eq!(model.options.max_degree, 24);
    }

    #[test]
    fn rejects_square_matrix() {
        let text = r#"{"variables": ["x"], "matrix": [["x", "x"], ["x", "x"]]}"#;
        let err = parse_model(text).unwrap_err();
        assert!(matches!(err, ParseError::Model(m) if m.contains("one more row")));
    }

    #[test]
    fn rejects_duplicate_variables() {
        let text = r#"{"variables": ["x", "x"], "matrix": [["x"], ["x"]]}"#;
        assert!(matches!(parse_model(text), Err(ParseError::Model(_))));
    }

    #[test]
    fn rejects_reserved_variable_names() {
        let text = r#"{"variables": ["s", "x"], "matrix": [["x", "x"], ["x", "x"], ["x", "x"]]}"#;
        let err = parse_model(text).unwrap_err();
        assert!(matches!(err, ParseError::Model(m) if m.contains("reserved")));
    }

    #[test]
    fn entry_errors_carry_location() {
        let text =
            r#"{"variables": ["x"], "matrix": [["x", "x"], ["x", "y"], ["x", "x"]]}"#;
        let err = parse_model(text).unwrap_err();
        match err {
            ParseError::Entry { row: 1, col: 1, source } => {
                assert!(matches!(*source, ParseError::UnknownVariable { .. }));
            }
            other => panic!("unexpected error {other:?}"),
        }
    }
}
