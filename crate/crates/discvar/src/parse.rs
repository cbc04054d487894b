//! Reader for system description files.
//!
//! ```text
//! # comment
//! parameters: r, a
//! variables: x, y
//! equations:
//!     a*x^2*y + 5*a*y^3 - r^3
//!     a - r^2
//! inequations:
//!     r
//! ```
//!
//! Headers start in column 1; expressions sit on the indented lines after
//! `equations:` or `inequations:`, one per line. Expressions use integer or
//! `num/den` literals, declared names, `+ - * ^` and parentheses. `^` binds
//! tightest and takes a non-negative integer exponent, then unary minus, then
//! `*`, then `+`/`-`. Juxtaposition is not multiplication.

use std::fmt;
use std::sync::Arc;

use discvar_core::{Error as CoreError, ParametricSystem, Polynomial, Rational, Ring};
use num_bigint::BigInt;
use num_traits::Zero;

/// A syntax or declaration error; `line` and `column` are 1-based.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParseError {
    pub line: usize,
    pub column: usize,
    pub message: String,
}

impl ParseError {
    fn new(line: usize, column: usize, message: impl Into<String>) -> Self {
        ParseError {
            line,
            column,
            message: message.into(),
        }
    }
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "line {}, column {}: {}", self.line, self.column, self.message)
    }
}

impl std::error::Error for ParseError {}

/// An expression as written, with its source position.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SourceExpr {
    pub line: usize,
    /// Column of the first character of `text`.
    pub column: usize,
    pub text: String,
}

/// The raw sections of a system file.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct SystemFile {
    pub parameters: Vec<String>,
    pub variables: Vec<String>,
    pub equations: Vec<SourceExpr>,
    pub inequations: Vec<SourceExpr>,
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum Section {
    Parameters,
    Variables,
    Equations,
    Inequations,
}

fn strip_comment(line: &str) -> &str {
    match line.find('#') {
        Some(i) => &line[..i],
        None => line,
    }
}

fn is_identifier(s: &str) -> bool {
    let mut chars = s.chars();
    matches!(chars.next(), Some(c) if c.is_ascii_alphabetic())
        && chars.all(|c| c.is_ascii_alphanumeric() || c == '_')
}

fn char_column(line: &str, byte: usize) -> usize {
    line[..byte].chars().count() + 1
}

impl SystemFile {
    /// Splits `text` into sections without interpreting expressions.
    pub fn parse(text: &str) -> Result<SystemFile, ParseError> {
        let mut file = SystemFile::default();
        let mut seen: Vec<Section> = Vec::new();
        let mut current: Option<Section> = None;
        let mut equations_header: Option<usize> = None;

        for (idx, raw) in text.lines().enumerate() {
            let lineno = idx + 1;
            let line = strip_comment(raw);
            if line.trim().is_empty() {
                continue;
            }
            if line.starts_with(|c: char| c.is_whitespace()) {
                let start = line.len() - line.trim_start().len();
                let expr = SourceExpr {
                    line: lineno,
                    column: char_column(line, start),
                    text: line.trim().to_string(),
                };
                match current {
                    Some(Section::Equations) => file.equations.push(expr),
                    Some(Section::Inequations) => file.inequations.push(expr),
                    _ => {
                        return Err(ParseError::new(
                            lineno,
                            expr.column,
                            "indented line outside an equations or inequations section",
                        ))
                    }
                }
                continue;
            }

            let Some(colon) = line.find(':') else {
                return Err(ParseError::new(lineno, 1, "expected a section header ending in `:`"));
            };
            let key = line[..colon].trim_end();
            let section = match key {
                "parameters" => Section::Parameters,
                "variables" => Section::Variables,
                "equations" => Section::Equations,
                "inequations" => Section::Inequations,
                other => {
                    return Err(ParseError::new(lineno, 1, format!("unknown section `{other}`")))
                }
            };
            if seen.contains(&section) {
                return Err(ParseError::new(lineno, 1, format!("duplicate section `{key}`")));
            }
            seen.push(section);
            current = Some(section);
            let rest = &line[colon + 1..];
            match section {
                Section::Parameters | Section::Variables => {
                    let names = parse_name_list(rest, lineno, line, colon + 1)?;
                    if section == Section::Parameters {
                        file.parameters = names;
                    } else {
                        file.variables = names;
                    }
                }
                Section::Equations | Section::Inequations => {
                    if !rest.trim().is_empty() {
                        let col = char_column(line, colon + 1 + (rest.len() - rest.trim_start().len()));
                        return Err(ParseError::new(
                            lineno,
                            col,
                            "expressions belong on the following indented lines",
                        ));
                    }
                    if section == Section::Equations {
                        equations_header = Some(lineno);
                    }
                }
            }
        }

        for (section, name) in [
            (Section::Parameters, "parameters"),
            (Section::Variables, "variables"),
        ] {
            if !seen.contains(&section) {
                return Err(ParseError::new(
                    text.lines().count().max(1),
                    1,
                    format!("missing `{name}:` section"),
                ));
            }
        }
        if file.equations.is_empty() {
            let line = equations_header.unwrap_or_else(|| text.lines().count().max(1));
            return Err(ParseError::new(line, 1, "empty equations section"));
        }
        Ok(file)
    }

    /// Builds the ring (parameters first, then variables) and parses every
    /// expression in it.
    pub fn to_system(&self) -> Result<ParametricSystem, ParseError> {
        for name in &self.parameters {
            if self.variables.contains(name) {
                return Err(ParseError::new(
                    1,
                    1,
                    format!("`{name}` is declared both as a parameter and a variable"),
                ));
            }
        }
        let ring = Ring::new(&self.parameters, &self.variables)
            .map_err(|e| ParseError::new(1, 1, e.to_string()))?;
        let parse_all = |exprs: &[SourceExpr]| -> Result<Vec<Polynomial>, ParseError> {
            exprs.iter().map(|e| parse_source_expr(&ring, e, None)).collect()
        };
        let equations = parse_all(&self.equations)?;
        let inequations = parse_all(&self.inequations)?;
        ParametricSystem::new(ring.clone(), equations, inequations)
            .map_err(|e| ParseError::new(1, 1, e.to_string()))
    }
}

impl SystemFile {
    /// The file form of `sys`, with canonical expression strings.
    pub fn from_system(sys: &ParametricSystem) -> SystemFile {
        let ring = sys.ring();
        let names = |vars: Vec<usize>| vars.iter().map(|&v| ring.name(v).to_string()).collect();
        let exprs = |ps: &[Polynomial]| {
            ps.iter()
                .map(|p| SourceExpr {
                    line: 0,
                    column: 5,
                    text: p.to_string(),
                })
                .collect()
        };
        SystemFile {
            parameters: names(ring.parameters()),
            variables: names(ring.unknowns()),
            equations: exprs(sys.equalities()),
            inequations: exprs(sys.inequations()),
        }
    }
}

impl fmt::Display for SystemFile {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "parameters: {}", self.parameters.join(", "))?;
        writeln!(f, "variables: {}", self.variables.join(", "))?;
        writeln!(f, "equations:")?;
        for e in &self.equations {
            writeln!(f, "    {}", e.text)?;
        }
        if !self.inequations.is_empty() {
            writeln!(f, "inequations:")?;
            for e in &self.inequations {
                writeln!(f, "    {}", e.text)?;
            }
        }
        Ok(())
    }
}

fn parse_name_list(rest: &str, lineno: usize, line: &str, offset: usize) -> Result<Vec<String>, ParseError> {
    let mut names: Vec<String> = Vec::new();
    if rest.trim().is_empty() {
        return Ok(names);
    }
    let mut pos = offset;
    for piece in rest.split(',') {
        let lead = piece.len() - piece.trim_start().len();
        let name = piece.trim();
        let col = char_column(line, pos + lead);
        if !is_identifier(name) {
            let shown = if name.is_empty() { "empty name".to_string() } else { format!("invalid name `{name}`") };
            return Err(ParseError::new(lineno, col, shown));
        }
        if names.iter().any(|n| n == name) {
            return Err(ParseError::new(lineno, col, format!("duplicate name `{name}`")));
        }
        names.push(name.to_string());
        pos += piece.len() + 1;
    }
    Ok(names)
}

/// Parses the whole text of a system file.
pub fn parse_system_file(text: &str) -> Result<ParametricSystem, ParseError> {
    SystemFile::parse(text)?.to_system()
}

/// Parses one expression over `ring`. Positions in errors are relative to
/// `text` (line 1).
pub fn parse_expression(ring: &Arc<Ring>, text: &str) -> Result<Polynomial, ParseError> {
    let src = SourceExpr {
        line: 1,
        column: 1,
        text: text.to_string(),
    };
    parse_source_expr(ring, &src, None)
}

/// Reads a `W_sd` file: one parameter-only expression per non-blank line.
pub fn parse_parameter_file(ring: &Arc<Ring>, text: &str) -> Result<Vec<Polynomial>, ParseError> {
    let params = ring.parameters();
    let mut out = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        let line = strip_comment(raw);
        if line.trim().is_empty() {
            continue;
        }
        let start = line.len() - line.trim_start().len();
        let src = SourceExpr {
            line: idx + 1,
            column: char_column(line, start),
            text: line.trim().to_string(),
        };
        out.push(parse_source_expr(ring, &src, Some(&params))?);
    }
    Ok(out)
}

#[derive(Debug, Clone, PartialEq, Eq)]
enum Tok {
    Num(Rational),
    Ident(String),
    Plus,
    Minus,
    Star,
    Caret,
    LParen,
    RParen,
}

fn describe(t: &Tok) -> String {
    match t {
        Tok::Num(n) => format!("number `{n}`"),
        Tok::Ident(s) => format!("name `{s}`"),
        Tok::Plus => "`+`".into(),
        Tok::Minus => "`-`".into(),
        Tok::Star => "`*`".into(),
        Tok::Caret => "`^`".into(),
        Tok::LParen => "`(`".into(),
        Tok::RParen => "`)`".into(),
    }
}

// (token, column)
fn tokenize(src: &SourceExpr) -> Result<Vec<(Tok, usize)>, ParseError> {
    let chars: Vec<char> = src.text.chars().collect();
    let mut out = Vec::new();
    let mut i = 0;
    let err = |i: usize, msg: String| ParseError::new(src.line, src.column + i, msg);
    while i < chars.len() {
        let c = chars[i];
        let start = i;
        match c {
            ' ' | '\t' => {
                i += 1;
                continue;
            }
            '+' => out.push((Tok::Plus, start)),
            '-' => out.push((Tok::Minus, start)),
            '*' => out.push((Tok::Star, start)),
            '^' => out.push((Tok::Caret, start)),
            '(' => out.push((Tok::LParen, start)),
            ')' => out.push((Tok::RParen, start)),
            '0'..='9' => {
                while i < chars.len() && chars[i].is_ascii_digit() {
                    i += 1;
                }
                let num: BigInt = chars[start..i].iter().collect::<String>().parse().expect("digits");
                let mut value = Rational::from_integer(num);
                if i < chars.len() && chars[i] == '/' {
                    let den_start = i + 1;
                    let mut j = den_start;
                    while j < chars.len() && chars[j].is_ascii_digit() {
                        j += 1;
                    }
                    if j == den_start {
                        return Err(err(i, "expected a denominator after `/`".into()));
                    }
                    let den: BigInt = chars[den_start..j].iter().collect::<String>().parse().expect("digits");
                    if den.is_zero() {
                        return Err(err(den_start, "zero denominator".into()));
                    }
                    value /= Rational::from_integer(den);
                    i = j;
                }
                out.push((Tok::Num(value), start));
                continue;
            }
            c if c.is_ascii_alphabetic() => {
                while i < chars.len() && (chars[i].is_ascii_alphanumeric() || chars[i] == '_') {
                    i += 1;
                }
                out.push((Tok::Ident(chars[start..i].iter().collect()), start));
                continue;
            }
            other => return Err(err(start, format!("unexpected character `{other}`"))),
        }
        i += 1;
    }
    Ok(out)
}

struct ExprParser<'a> {
    ring: &'a Arc<Ring>,
    allowed: Option<&'a [usize]>,
    src: &'a SourceExpr,
    toks: Vec<(Tok, usize)>,
    pos: usize,
}

impl<'a> ExprParser<'a> {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|(t, _)| t)
    }

    fn column(&self) -> usize {
        let offset = match self.toks.get(self.pos) {
            Some((_, c)) => *c,
            None => self.src.text.chars().count(),
        };
        self.src.column + offset
    }

    fn error(&self, msg: impl Into<String>) -> ParseError {
        ParseError::new(self.src.line, self.column(), msg)
    }

    fn unexpected(&self) -> ParseError {
        match self.peek() {
            Some(t) => self.error(format!("unexpected {}", describe(t))),
            None => self.error("unexpected end of expression"),
        }
    }

    fn arith(&self, r: Result<Polynomial, CoreError>, col: usize) -> Result<Polynomial, ParseError> {
        r.map_err(|e| ParseError::new(self.src.line, col, e.to_string()))
    }

    fn expr(&mut self) -> Result<Polynomial, ParseError> {
        let mut acc = self.term()?;
        while let Some(op) = self.peek().cloned() {
            let col = self.column();
            match op {
                Tok::Plus => {
                    self.pos += 1;
                    let rhs = self.term()?;
                    acc = self.arith(acc.try_add(&rhs), col)?;
                }
                Tok::Minus => {
                    self.pos += 1;
                    let rhs = self.term()?;
                    acc = self.arith(acc.try_sub(&rhs), col)?;
                }
                _ => break,
            }
        }
        Ok(acc)
    }

    fn term(&mut self) -> Result<Polynomial, ParseError> {
        let mut acc = self.unary()?;
        loop {
            match self.peek() {
                Some(Tok::Star) => {
                    let col = self.column();
                    self.pos += 1;
                    let rhs = self.unary()?;
                    acc = self.arith(acc.try_mul(&rhs), col)?;
                }
                Some(Tok::Num(_) | Tok::Ident(_) | Tok::LParen) => {
                    return Err(self.error("implicit multiplication is not allowed; use `*`"))
                }
                _ => return Ok(acc),
            }
        }
    }

    fn unary(&mut self) -> Result<Polynomial, ParseError> {
        if self.peek() == Some(&Tok::Minus) {
            self.pos += 1;
            return Ok(-self.unary()?);
        }
        self.power()
    }

    fn power(&mut self) -> Result<Polynomial, ParseError> {
        let base = self.atom()?;
        if self.peek() != Some(&Tok::Caret) {
            return Ok(base);
        }
        let col = self.column();
        self.pos += 1;
        let exp = match self.peek() {
            Some(Tok::Num(n)) if n.is_integer() => n.to_integer(),
            Some(_) => return Err(self.error("exponent must be a non-negative integer literal")),
            None => return Err(self.unexpected()),
        };
        let exp: u32 = exp
            .try_into()
            .map_err(|_| self.error("exponent out of range"))?;
        self.pos += 1;
        if self.peek() == Some(&Tok::Caret) {
            return Err(self.error("chained `^` is ambiguous; add parentheses"));
        }
        self.arith(base.try_pow(exp), col)
    }

    fn atom(&mut self) -> Result<Polynomial, ParseError> {
        let Some(tok) = self.peek().cloned() else {
            return Err(self.unexpected());
        };
        match tok {
            Tok::Num(n) => {
                self.pos += 1;
                Ok(Polynomial::constant(self.ring.clone(), n))
            }
            Tok::Ident(name) => {
                let Some(var) = self.ring.index_of(&name) else {
                    return Err(self.error(format!("undeclared identifier `{name}`")));
                };
                if let Some(allowed) = self.allowed {
                    if !allowed.contains(&var) {
                        return Err(self.error(format!("`{name}` is not a parameter")));
                    }
                }
                self.pos += 1;
                Ok(Polynomial::var(self.ring.clone(), var))
            }
            Tok::LParen => {
                self.pos += 1;
                let inner = self.expr()?;
                if self.peek() != Some(&Tok::RParen) {
                    return Err(match self.peek() {
                        None => self.error("missing `)`"),
                        Some(_) => self.unexpected(),
                    });
                }
                self.pos += 1;
                Ok(inner)
            }
            _ => Err(self.unexpected()),
        }
    }
}

fn parse_source_expr(ring: &Arc<Ring>, src: &SourceExpr, allowed: Option<&[usize]>) -> Result<Polynomial, ParseError> {
    let toks = tokenize(src)?;
    let mut p = ExprParser {
        ring,
        allowed,
        src,
        toks,
        pos: 0,
    };
    let value = p.expr()?;
    if p.pos < p.toks.len() {
        return Err(match p.peek() {
            Some(Tok::RParen) => p.error("unbalanced `)`"),
            _ => p.unexpected(),
        });
    }
    Ok(value)
}

#[cfg(test)]
mod tests {
    use super::*;
    use discvar_core::BlockOrder;

    const WORKED_EXAMPLE: &str = "\
# the worked example
parameters: r, a
variables: x, y
equations:
    a*x^2*y + 5*a*y^3 - r^3
    a - r^2
inequations:
    r
";

    fn ring() -> Arc<Ring> {
        Ring::new(&["r", "a"], &["x", "y"]).unwrap()
    }

    #[test]
    fn reads_the_worked_example() {
        let sys = parse_system_file(WORKED_EXAMPLE).unwrap();
        assert_eq!(sys.ring().names(), ["r", "a", "x", "y"]);
        assert_eq!(sys.ring().parameters(), [0, 1]);
        let shown: Vec<String> = sys.equalities().iter().map(|p| p.to_string()).collect();
        assert_eq!(shown, ["a*x^2*y + 5*a*y^3 - r^3", "-r^2 + a"]);
        assert_eq!(sys.inequations().len(), 1);
    }

    #[test]
    fn expression_examples() {
        let ring = ring();
        let p = parse_expression(&ring, "5*a*y^3").unwrap();
        assert_eq!(p.len(), 1);
        assert_eq!(p.terms().next().unwrap().1, &Rational::from_integer(5.into()));

        let err = parse_expression(&ring, "x**2").unwrap_err();
        assert_eq!((err.line, err.column), (1, 3));
        assert!(err.message.contains("`*`"), "{err}");
    }

    #[test]
    fn precedence() {
        let ring = ring();
        let e = |t| parse_expression(&ring, t).unwrap();
        assert_eq!(e("-x^2"), -e("x^2"));
        assert_eq!(e("2*x^2"), e("x^2 + x^2"));
        assert_eq!(e("-(x + 1)^2"), e("-x^2 - 2*x - 1"));
        assert_eq!(e("x - y - a"), e("x - (y + a)"));
        assert_eq!(e("2*-x"), e("-2*x"));
        assert_eq!(e("3/2*x"), e("x + 1/2*x"));
        assert_eq!(e("(x)"), e("x"));
    }

    #[test]
    fn rejects_malformed_expressions() {
        let ring = ring();
        let col = |t| {
            let e = parse_expression(&ring, t).unwrap_err();
            (e.column, e.message)
        };
        assert_eq!(col("2x").0, 2);
        assert!(col("2x").1.contains("implicit"));
        assert!(col("x y").1.contains("implicit"));
        assert!(col("x(y)").1.contains("implicit"));
        assert_eq!(col("x + z"), (5, "undeclared identifier `z`".to_string()));
        assert!(col("x^y").1.contains("exponent"));
        assert!(col("x^-1").1.contains("exponent"));
        assert!(col("x^2^3").1.contains("chained"));
        assert!(col("(x + 1").1.contains("missing `)`"));
        assert!(col("x + 1)").1.contains("unbalanced"));
        assert!(col("x / 2").1.contains("unexpected character"));
        assert!(col("1/0").1.contains("zero denominator"));
        assert!(col("x +").1.contains("end of expression"));
        assert!(col("+x").1.contains("unexpected"));
        assert!(col("x^99999999999").1.contains("range"));
        assert!(col("x^4000000000*x^4000000000").1.contains("overflow"));
    }

    #[test]
    fn file_level_errors() {
        let err = parse_system_file("parameters: u\nvariables: x\nequations:\ninequations:\n    x\n").unwrap_err();
        assert_eq!(err.message, "empty equations section");
        assert_eq!(err.line, 3);

        let err = parse_system_file("parameters: u\nvariables: x\n").unwrap_err();
        assert_eq!(err.message, "empty equations section");

        let err = parse_system_file("parameters: u, 1x\nvariables: x\nequations:\n    x\n").unwrap_err();
        assert_eq!((err.line, err.column), (1, 16));

        let err = parse_system_file("parameters: u\nvariables: u\nequations:\n    u\n").unwrap_err();
        assert!(err.message.contains("both"));

        let err = parse_system_file("parameters: u\nvariables: x\nequations:\n    x +* u\n").unwrap_err();
        assert_eq!((err.line, err.column), (4, 8));

        let err = parse_system_file("parameters: u\nvariables: x\nequations: x\n").unwrap_err();
        assert_eq!((err.line, err.column), (3, 12));

        let err = parse_system_file("parameters: u\nvariables: x\n    x\nequations:\n    x\n").unwrap_err();
        assert!(err.message.contains("indented"));

        let err = parse_system_file("parameters: u\nparameters: v\n").unwrap_err();
        assert!(err.message.contains("duplicate"));

        let err = parse_system_file("params: u\n").unwrap_err();
        assert!(err.message.contains("unknown section"));
    }

    #[test]
    fn written_files_read_back() {
        let sys = parse_system_file(WORKED_EXAMPLE).unwrap();
        let text = SystemFile::from_system(&sys).to_string();
        assert_eq!(parse_system_file(&text).unwrap(), sys);
        assert_eq!(SystemFile::from_system(&parse_system_file(&text).unwrap()).to_string(), text);
    }

    #[test]
    fn parameter_file() {
        let ring = ring();
        let gens = parse_parameter_file(&ring, "# w_sd\n  r*a\n\na - 1  # trailing\n").unwrap();
        assert_eq!(gens.len(), 2);
        let err = parse_parameter_file(&ring, "r\nx*a\n").unwrap_err();
        assert_eq!((err.line, err.column), (2, 1));
        assert!(err.message.contains("not a parameter"));
    }

    #[test]
    fn canonical_strings_read_back() {
        let ring = ring();
        let order = BlockOrder::elimination(&ring);
        for text in [
            "a*x^2*y + 5*a*y^3 - a*r",
            "-3/2*x*y^2 + 7/5*r - 1",
            "r^2 - a",
            "0",
            "-1",
        ] {
            let p = parse_expression(&ring, text).unwrap();
            assert_eq!(p.canonical_string(&order), text);
        }
    }
}
