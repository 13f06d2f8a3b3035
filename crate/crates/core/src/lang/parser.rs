use std::collections::BTreeMap;

use super::lexer::{tokenize, Tok, Token};
use super::{LangError, Position};
use crate::algebra::CycleSet;
use crate::pipeline::{Equation, Term, VarId};

pub(super) struct Parser {
    toks: Vec<Token>,
    at: usize,
}

impl Parser {
    pub(super) fn new(text: &str) -> Result<Self, LangError> {
        Ok(Parser {
            toks: tokenize(text)?,
            at: 0,
        })
    }

    fn peek(&self) -> &Token {
        &self.toks[self.at]
    }

    fn bump(&mut self) -> Token {
        let t = self.toks[self.at].clone();
        if t.tok != Tok::Eof {
            self.at += 1;
        }
        t
    }

    fn unexpected(&self, wanted: &str) -> LangError {
        let t = self.peek();
        LangError::syntax(
            t.pos,
            format!("expected {wanted}, found {}", t.tok.describe()),
        )
    }

    fn expect(&mut self, tok: Tok, wanted: &str) -> Result<Position, LangError> {
        if self.peek().tok == tok {
            Ok(self.bump().pos)
        } else {
            Err(self.unexpected(wanted))
        }
    }

    fn int(&mut self) -> Result<(u64, Position), LangError> {
        match self.peek().tok {
            Tok::Int(v) => {
                let pos = self.bump().pos;
                Ok((v, pos))
            }
            _ => Err(self.unexpected("an integer")),
        }
    }

    fn exponent(&mut self) -> Result<u32, LangError> {
        let (v, pos) = self.int()?;
        u32::try_from(v).map_err(|_| LangError::NumberOutOfRange { pos })
    }

    fn eat(&mut self, tok: Tok) -> bool {
        if self.peek().tok == tok {
            self.bump();
            true
        } else {
            false
        }
    }

    pub(super) fn finish(&mut self) -> Result<(), LangError> {
        self.expect(Tok::Eof, "end of input").map(|_| ())
    }

    fn cycle(&mut self) -> Result<(u64, u64, Position), LangError> {
        let pos = self.expect(Tok::Cycle, "'C'")?;
        self.expect(Tok::LParen, "'('")?;
        let (period, _) = self.int()?;
        self.expect(Tok::Comma, "','")?;
        let (count, _) = self.int()?;
        self.expect(Tok::RParen, "')'")?;
        if period == 0 || count == 0 {
            return Err(LangError::InvalidComponent { pos, period, count });
        }
        Ok((period, count, pos))
    }

    /// `"0" | cycle { "+" cycle }`
    pub(super) fn system(&mut self) -> Result<CycleSet, LangError> {
        if self.peek().tok == Tok::Int(0) {
            self.bump();
            return Ok(CycleSet::empty());
        }
        let mut raw = vec![self.cycle()?];
        while self.eat(Tok::Plus) {
            raw.push(self.cycle()?);
        }
        let pos = raw[0].2;
        CycleSet::canonicalize(raw.into_iter().map(|(p, n, _)| (p, n)))
            .map_err(|source| LangError::Algebra { pos, source })
    }

    fn var(&mut self) -> Result<VarId, LangError> {
        match self.peek().tok {
            Tok::Var(0) => Err(LangError::InvalidVariable {
                pos: self.peek().pos,
            }),
            Tok::Var(i) => {
                self.bump();
                Ok(VarId(i))
            }
            _ => Err(self.unexpected("a variable")),
        }
    }

    /// `"(" system ")" "*" VAR [ "^" INT ]`
    fn lterm(&mut self) -> Result<Term, LangError> {
        self.expect(Tok::LParen, "'('")?;
        let coefficient = self.system()?;
        self.expect(Tok::RParen, "')'")?;
        self.expect(Tok::Star, "'*'")?;
        let var = self.var()?;
        let exponent = if self.eat(Tok::Caret) {
            self.exponent()?
        } else {
            1
        };
        Ok(Term::new(coefficient, var, exponent))
    }

    /// `lterm { "+" lterm } "=" system`
    pub(super) fn equation(&mut self) -> Result<Equation, LangError> {
        let pos = self.peek().pos;
        let mut terms = vec![self.lterm()?];
        while self.eat(Tok::Plus) {
            terms.push(self.lterm()?);
        }
        self.expect(Tok::Eq, "'+' or '='")?;
        let rhs = self.system()?;
        Equation::new(terms, rhs).map_err(|source| LangError::Equation { pos, source })
    }

    /// `VAR "=" system { ";" VAR "=" system } [ ";" ]`
    pub(super) fn assignment(&mut self) -> Result<BTreeMap<VarId, CycleSet>, LangError> {
        let mut out = BTreeMap::new();
        loop {
            let pos = self.peek().pos;
            let var = self.var()?;
            self.expect(Tok::Eq, "'='")?;
            let value = self.system()?;
            if out.insert(var, value).is_some() {
                return Err(LangError::DuplicateVariable { pos, var });
            }
            if !self.eat(Tok::Semi) || self.peek().tok == Tok::Eof {
                return Ok(out);
            }
        }
    }

    /// Expressions for `eval`: `+` over `*` over `^`, integer `k` meaning `C(1,k)`.
    pub(super) fn expr(&mut self) -> Result<CycleSet, LangError> {
        let mut acc = self.product()?;
        while self.peek().tok == Tok::Plus {
            let pos = self.bump().pos;
            let rhs = self.product()?;
            acc = acc
                .checked_add(&rhs)
                .map_err(|source| LangError::Algebra { pos, source })?;
        }
        Ok(acc)
    }

    fn product(&mut self) -> Result<CycleSet, LangError> {
        let mut acc = self.power()?;
        while self.peek().tok == Tok::Star {
            let pos = self.bump().pos;
            let rhs = self.power()?;
            acc = acc
                .multiply(&rhs)
                .map_err(|source| LangError::Algebra { pos, source })?;
        }
        Ok(acc)
    }

    fn power(&mut self) -> Result<CycleSet, LangError> {
        let base = self.atom()?;
        if self.peek().tok != Tok::Caret {
            return Ok(base);
        }
        let pos = self.bump().pos;
        let exp = self.exponent()?;
        base.power(exp)
            .map_err(|source| LangError::Algebra { pos, source })
    }

    fn atom(&mut self) -> Result<CycleSet, LangError> {
        match self.peek().tok {
            Tok::Cycle => {
                let (p, n, pos) = self.cycle()?;
                CycleSet::cycles(p, n).map_err(|source| LangError::Algebra { pos, source })
            }
            Tok::Int(k) => {
                self.bump();
                Ok(if k == 0 {
                    CycleSet::empty()
                } else {
                    CycleSet::cycles(1, k).expect("period 1 is valid")
                })
            }
            Tok::LParen => {
                self.bump();
                let inner = self.expr()?;
                self.expect(Tok::RParen, "')'")?;
                Ok(inner)
            }
            _ => Err(self.unexpected("a cycle, an integer or '('")),
        }
    }
}
