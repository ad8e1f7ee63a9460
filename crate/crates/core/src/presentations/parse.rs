//! Recursive-descent parser for the presentation DSL.
//!
//! ```text
//! file        := "group" "<" genlist "|" relatorlist ">"
//! genlist     := ident ("," ident)*
//! relatorlist := relator ("," relator)* | ε
//! relator     := term ("*" term)*
//! term        := atom ("^" signed-int)?
//! atom        := ident | "(" relator ")" | "(" relator "," relator ")"
//!              | "[" relator "," relator "]"
//! ```
//!
//! `[u,v]` and `(u,v)` both denote `u^-1*v^-1*u*v`. The keyword is matched
//! case-insensitively so Magma's `Group<...>` is accepted verbatim.

use std::collections::HashMap;

use super::{Presentation, PresentationError, Word};

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Ident(String),
    Int(u64),
    Sym(char),
    Eof,
}

#[derive(Clone, Debug)]
struct Spanned {
    tok: Tok,
    line: usize,
    column: usize,
}

fn tokenize(text: &str) -> Result<Vec<Spanned>, PresentationError> {
    let mut out = Vec::new();
    let chars: Vec<char> = text.chars().collect();
    let (mut i, mut line, mut column) = (0, 1, 1);
    while i < chars.len() {
        let c = chars[i];
        let (start_line, start_col) = (line, column);
        if c == '\n' {
            i += 1;
            line += 1;
            column = 1;
            continue;
        }
        if c.is_whitespace() {
            i += 1;
            column += 1;
            continue;
        }
        if c.is_ascii_alphabetic() {
            let mut s = String::new();
            while i < chars.len() && (chars[i].is_ascii_alphanumeric() || chars[i] == '_') {
                s.push(chars[i]);
                i += 1;
                column += 1;
            }
            out.push(Spanned {
                tok: Tok::Ident(s),
                line: start_line,
                column: start_col,
            });
            continue;
        }
        if c.is_ascii_digit() {
            let mut v: u64 = 0;
            while i < chars.len() && chars[i].is_ascii_digit() {
                v = v
                    .checked_mul(10)
                    .and_then(|v| v.checked_add(chars[i].to_digit(10).unwrap() as u64))
                    .ok_or(PresentationError::Syntax {
                        line: start_line,
                        column: start_col,
                        message: "integer literal too large".into(),
                    })?;
                i += 1;
                column += 1;
            }
            out.push(Spanned {
                tok: Tok::Int(v),
                line: start_line,
                column: start_col,
            });
            continue;
        }
        if "<>|,*^()[]-".contains(c) {
            out.push(Spanned {
                tok: Tok::Sym(c),
                line: start_line,
                column: start_col,
            });
            i += 1;
            column += 1;
            continue;
        }
        return Err(PresentationError::Syntax {
            line,
            column,
            message: format!("unexpected character {c:?}"),
        });
    }
    out.push(Spanned {
        tok: Tok::Eof,
        line,
        column,
    });
    Ok(out)
}

const MAX_EXPONENT: u64 = (1 << 31) - 1;

struct Parser {
    toks: Vec<Spanned>,
    pos: usize,
    names: HashMap<String, usize>,
}

impl Parser {
    fn peek(&self) -> &Spanned {
        &self.toks[self.pos]
    }

    fn next(&mut self) -> Spanned {
        let t = self.toks[self.pos].clone();
        if self.pos + 1 < self.toks.len() {
            self.pos += 1;
        }
        t
    }

    fn err<T>(&self, at: &Spanned, message: impl Into<String>) -> Result<T, PresentationError> {
        Err(PresentationError::Syntax {
            line: at.line,
            column: at.column,
            message: message.into(),
        })
    }

    fn expect(&mut self, c: char) -> Result<(), PresentationError> {
        let t = self.next();
        if t.tok == Tok::Sym(c) {
            Ok(())
        } else {
            self.err(&t, format!("expected '{c}', found {}", describe(&t.tok)))
        }
    }

    fn is_sym(&self, c: char) -> bool {
        self.peek().tok == Tok::Sym(c)
    }

    fn ident(&mut self) -> Result<(String, Spanned), PresentationError> {
        let t = self.next();
        match &t.tok {
            Tok::Ident(s) => Ok((s.clone(), t.clone())),
            other => self.err(&t, format!("expected identifier, found {}", describe(other))),
        }
    }

    fn file(&mut self) -> Result<Presentation, PresentationError> {
        let (kw, t) = self.ident()?;
        if !kw.eq_ignore_ascii_case("group") {
            return self.err(&t, format!("expected 'group', found {kw:?}"));
        }
        self.expect('<')?;
        let mut gens = Vec::new();
        loop {
            let (name, _) = self.ident()?;
            if self.names.insert(name.clone(), gens.len()).is_some() {
                return Err(PresentationError::DuplicateGenerator(name));
            }
            gens.push(name);
            if self.is_sym(',') {
                self.next();
            } else {
                break;
            }
        }
        self.expect('|')?;
        let mut rels = Vec::new();
        if !self.is_sym('>') {
            loop {
                rels.push(self.relator()?);
                if self.is_sym(',') {
                    self.next();
                } else {
                    break;
                }
            }
        }
        self.expect('>')?;
        let t = self.peek().clone();
        if t.tok != Tok::Eof {
            return self.err(&t, format!("trailing input: {}", describe(&t.tok)));
        }
        Presentation::new(gens, rels)
    }

    fn relator(&mut self) -> Result<Word, PresentationError> {
        let mut w = self.term()?;
        while self.is_sym('*') {
            self.next();
            w = w.concat(&self.term()?);
        }
        Ok(w)
    }

    fn term(&mut self) -> Result<Word, PresentationError> {
        let base = self.atom()?;
        if !self.is_sym('^') {
            return Ok(base);
        }
        self.next();
        let negative = if self.is_sym('-') {
            self.next();
            true
        } else {
            false
        };
        let t = self.next();
        let Tok::Int(v) = t.tok else {
            return self.err(&t, format!("expected exponent, found {}", describe(&t.tok)));
        };
        if v == 0 {
            return Err(PresentationError::ZeroExponent {
                line: t.line,
                column: t.column,
            });
        }
        if v > MAX_EXPONENT {
            return self.err(&t, "exponent exceeds 2^31-1");
        }
        let e = if negative { -(v as i64) } else { v as i64 };
        Ok(base.pow(e))
    }

    fn atom(&mut self) -> Result<Word, PresentationError> {
        let t = self.next();
        match &t.tok {
            Tok::Ident(name) => match self.names.get(name) {
                Some(&g) => Ok(Word::generator(g)),
                None => Err(PresentationError::UnknownSymbol {
                    name: name.clone(),
                    line: t.line,
                    column: t.column,
                }),
            },
            Tok::Sym('(') => {
                let u = self.relator()?;
                if self.is_sym(',') {
                    self.next();
                    let v = self.relator()?;
                    self.expect(')')?;
                    Ok(commutator(&u, &v))
                } else {
                    self.expect(')')?;
                    Ok(u)
                }
            }
            Tok::Sym('[') => {
                let u = self.relator()?;
                self.expect(',')?;
                let v = self.relator()?;
                self.expect(']')?;
                Ok(commutator(&u, &v))
            }
            other => self.err(&t, format!("expected generator or '(', found {}", describe(other))),
        }
    }
}

fn commutator(u: &Word, v: &Word) -> Word {
    u.inverse().concat(&v.inverse()).concat(u).concat(v)
}

fn describe(t: &Tok) -> String {
    match t {
        Tok::Ident(s) => format!("identifier {s:?}"),
        Tok::Int(v) => format!("integer {v}"),
        Tok::Sym(c) => format!("'{c}'"),
        Tok::Eof => "end of input".into(),
    }
}

/// Parses a presentation written in the DSL.
pub fn parse_presentation(text: &str) -> Result<Presentation, PresentationError> {
    let toks = tokenize(text)?;
    Parser {
        toks,
        pos: 0,
        names: HashMap::new(),
    }
    .file()
}

/// Parses a catalog file: one `name: group<...>` entry per line. Blank lines
/// and lines starting with `#` are ignored.
pub fn parse_catalog_file(text: &str) -> Result<Vec<(String, Presentation)>, PresentationError> {
    let mut out = Vec::new();
    for (lineno, line) in text.lines().enumerate() {
        let trimmed = line.trim();
        if trimmed.is_empty() || trimmed.starts_with('#') {
            continue;
        }
        let Some((name, body)) = trimmed.split_once(':') else {
            return Err(PresentationError::Syntax {
                line: lineno + 1,
                column: 1,
                message: "expected 'name: group<...>'".into(),
            });
        };
        let p = parse_presentation(body).map_err(|e| match e {
            PresentationError::Syntax { column, message, .. } => PresentationError::Syntax {
                line: lineno + 1,
                column,
                message,
            },
            other => other,
        })?;
        out.push((name.trim().to_string(), p));
    }
    Ok(out)
}
