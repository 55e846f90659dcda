//! Recursive-descent parser producing an unresolved syntax tree.

use crate::finding::{rules, Finding, SourceSpan};
use crate::knowledge_base::{ActorKind, PatternSource};

use super::lexer::{Keyword, Token, TokenKind};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ModelAst {
    pub name: String,
    /// Span of the `system` keyword.
    pub span: SourceSpan,
    pub items: Vec<Item>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Item {
    Actor(ActorAst),
    Wallet(WalletAst),
    Depends(DependsAst),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ActorAst {
    pub kind: ActorKind,
    pub id: String,
    pub id_span: SourceSpan,
    pub props: Vec<Prop>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Prop {
    Patterns(Vec<PatternAst>),
    Claims(Vec<(u32, SourceSpan)>),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PatternAst {
    pub source: PatternSource,
    pub name: String,
    pub span: SourceSpan,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WalletAst {
    pub id: String,
    pub id_span: SourceSpan,
    pub owner_ref: String,
    pub owner_span: SourceSpan,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DependsAst {
    pub depender: String,
    pub depender_span: SourceSpan,
    pub dependee: String,
    pub dependee_span: SourceSpan,
    pub nfr: u32,
    pub nfr_span: SourceSpan,
    /// Span of the `depends` keyword.
    pub span: SourceSpan,
}

struct Parser<'t> {
    tokens: &'t [Token],
    pos: usize,
    eof: SourceSpan,
}

type PResult<T> = Result<T, Finding>;

/// Parses a token stream. `eof` is the zero-length span just past the end of
/// the source text, used for end-of-input diagnostics.
pub fn parse(tokens: &[Token], eof: SourceSpan) -> PResult<ModelAst> {
    let mut p = Parser { tokens, pos: 0, eof };
    let model = p.model()?;
    if let Some(tok) = p.peek() {
        return Err(p.error_at(tok.span, format!("expected end of input, found {}", tok.kind)));
    }
    Ok(model)
}

/// Span just past the last character of `text`.
pub fn end_span(text: &str) -> SourceSpan {
    let line = text.split('\n').count();
    let column = text.split('\n').next_back().map_or(0, |l| l.chars().count()) + 1;
    SourceSpan::new(line, column, 0)
}

impl<'t> Parser<'t> {
    fn peek(&self) -> Option<&'t Token> {
        self.tokens.get(self.pos)
    }

    fn error_at(&self, span: SourceSpan, message: String) -> Finding {
        Finding::error(rules::SYNTAX_PARSE, "input", message).with_span(span)
    }

    fn unexpected(&self, expected: &str) -> Finding {
        match self.peek() {
            Some(tok) => self.error_at(tok.span, format!("expected {expected}, found {}", tok.kind)),
            None => self.error_at(self.eof, format!("expected {expected}, found end of input")),
        }
    }

    fn expect(&mut self, kind: TokenKind) -> PResult<SourceSpan> {
        match self.peek() {
            Some(tok) if tok.kind == kind => {
                self.pos += 1;
                Ok(tok.span)
            }
            _ => Err(self.unexpected(&kind.to_string())),
        }
    }

    fn eat(&mut self, kind: &TokenKind) -> bool {
        if self.peek().is_some_and(|t| &t.kind == kind) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn keyword(&mut self, kw: Keyword) -> PResult<SourceSpan> {
        self.expect(TokenKind::Keyword(kw))
    }

    fn string(&mut self) -> PResult<(String, SourceSpan)> {
        match self.peek() {
            Some(Token {
                kind: TokenKind::Str(s),
                span,
            }) => {
                self.pos += 1;
                Ok((s.clone(), *span))
            }
            _ => Err(self.unexpected("a string literal")),
        }
    }

    fn nfr(&mut self) -> PResult<(u32, SourceSpan)> {
        match self.peek() {
            Some(Token {
                kind: TokenKind::NfrKey(n),
                span,
            }) => {
                self.pos += 1;
                Ok((*n, *span))
            }
            _ => Err(self.unexpected("an NFR key")),
        }
    }

    fn model(&mut self) -> PResult<ModelAst> {
        let span = self.keyword(Keyword::System)?;
        let (name, _) = self.string()?;
        self.expect(TokenKind::LBrace)?;
        let mut items = Vec::new();
        loop {
            match self.peek().map(|t| &t.kind) {
                Some(TokenKind::RBrace) => {
                    self.pos += 1;
                    break;
                }
                Some(TokenKind::Keyword(Keyword::Actor)) => items.push(Item::Actor(self.actor()?)),
                Some(TokenKind::Keyword(Keyword::Wallet)) => items.push(Item::Wallet(self.wallet()?)),
                Some(TokenKind::Keyword(Keyword::Depends)) => items.push(Item::Depends(self.depends()?)),
                _ => return Err(self.unexpected("`actor`, `wallet`, `depends` or `}`")),
            }
        }
        Ok(ModelAst { name, span, items })
    }

    fn actor(&mut self) -> PResult<ActorAst> {
        self.keyword(Keyword::Actor)?;
        let kind = match self.peek().map(|t| &t.kind) {
            Some(TokenKind::Keyword(Keyword::Owner)) => ActorKind::DataOwner,
            Some(TokenKind::Keyword(Keyword::Issuer)) => ActorKind::Issuer,
            Some(TokenKind::Keyword(Keyword::Verifier)) => ActorKind::Verifier,
            _ => return Err(self.unexpected("`owner`, `issuer` or `verifier`")),
        };
        self.pos += 1;
        let (id, id_span) = self.string()?;
        self.expect(TokenKind::LBrace)?;
        let mut props = Vec::new();
        loop {
            match self.peek().map(|t| &t.kind) {
                Some(TokenKind::RBrace) => {
                    self.pos += 1;
                    break;
                }
                Some(TokenKind::Keyword(Keyword::Patterns)) => {
                    self.pos += 1;
                    self.expect(TokenKind::Colon)?;
                    let pats = self.list(Self::pattern)?;
                    props.push(Prop::Patterns(pats));
                }
                Some(TokenKind::Keyword(Keyword::Claims)) => {
                    self.pos += 1;
                    self.expect(TokenKind::Colon)?;
                    let claims = self.list(Self::nfr)?;
                    props.push(Prop::Claims(claims));
                }
                _ => return Err(self.unexpected("`patterns`, `claims` or `}`")),
            }
        }
        Ok(ActorAst {
            kind,
            id,
            id_span,
            props,
        })
    }

    /// `"[" item ("," item)* "]" ";"`
    fn list<T>(&mut self, item: fn(&mut Self) -> PResult<T>) -> PResult<Vec<T>> {
        self.expect(TokenKind::LBracket)?;
        let mut items = vec![item(self)?];
        while self.eat(&TokenKind::Comma) {
            items.push(item(self)?);
        }
        self.expect(TokenKind::RBracket)?;
        self.expect(TokenKind::Semicolon)?;
        Ok(items)
    }

    fn pattern(&mut self) -> PResult<PatternAst> {
        let (source, span) = match self.peek() {
            Some(Token {
                kind: TokenKind::Ident(s),
                span,
            }) if s == "A" || s == "B" => (s.parse::<PatternSource>().unwrap(), *span),
            _ => return Err(self.unexpected("pattern catalog `A` or `B`")),
        };
        self.pos += 1;
        self.expect(TokenKind::Colon)?;
        let (name, _) = self.string()?;
        Ok(PatternAst { source, name, span })
    }

    fn wallet(&mut self) -> PResult<WalletAst> {
        self.keyword(Keyword::Wallet)?;
        let (id, id_span) = self.string()?;
        self.expect(TokenKind::LBrace)?;
        self.keyword(Keyword::For)?;
        self.expect(TokenKind::Colon)?;
        let (owner_ref, owner_span) = self.string()?;
        self.expect(TokenKind::Semicolon)?;
        self.expect(TokenKind::RBrace)?;
        Ok(WalletAst {
            id,
            id_span,
            owner_ref,
            owner_span,
        })
    }

    fn depends(&mut self) -> PResult<DependsAst> {
        let span = self.keyword(Keyword::Depends)?;
        let (depender, depender_span) = self.string()?;
        self.keyword(Keyword::On)?;
        let (dependee, dependee_span) = self.string()?;
        self.expect(TokenKind::Colon)?;
        let (nfr, nfr_span) = self.nfr()?;
        self.expect(TokenKind::Semicolon)?;
        Ok(DependsAst {
            depender,
            depender_span,
            dependee,
            dependee_span,
            nfr,
            nfr_span,
            span,
        })
    }
}
