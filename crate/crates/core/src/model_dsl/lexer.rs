use std::fmt;

use crate::finding::{rules, Finding, SourceSpan};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Keyword {
    System,
    Actor,
    Owner,
    Issuer,
    Verifier,
    Wallet,
    For,
    Patterns,
    Claims,
    Depends,
    On,
}

impl Keyword {
    const ALL: [Keyword; 11] = [
        Keyword::System,
        Keyword::Actor,
        Keyword::Owner,
        Keyword::Issuer,
        Keyword::Verifier,
        Keyword::Wallet,
        Keyword::For,
        Keyword::Patterns,
        Keyword::Claims,
        Keyword::Depends,
        Keyword::On,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            Keyword::System => "system",
            Keyword::Actor => "actor",
            Keyword::Owner => "owner",
            Keyword::Issuer => "issuer",
            Keyword::Verifier => "verifier",
            Keyword::Wallet => "wallet",
            Keyword::For => "for",
            Keyword::Patterns => "patterns",
            Keyword::Claims => "claims",
            Keyword::Depends => "depends",
            Keyword::On => "on",
        }
    }

    fn lookup(word: &str) -> Option<Keyword> {
        Self::ALL.into_iter().find(|k| k.as_str() == word)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum TokenKind {
    Keyword(Keyword),
    Ident(String),
    Str(String),
    /// `NFR<digits>`; range checking happens during resolution.
    NfrKey(u32),
    LBrace,
    RBrace,
    LBracket,
    RBracket,
    Comma,
    Semicolon,
    Colon,
}

impl fmt::Display for TokenKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TokenKind::Keyword(k) => write!(f, "`{}`", k.as_str()),
            TokenKind::Ident(s) => write!(f, "identifier `{s}`"),
            TokenKind::Str(s) => write!(f, "string {s:?}"),
            TokenKind::NfrKey(n) => write!(f, "`NFR{n}`"),
            TokenKind::LBrace => f.write_str("`{`"),
            TokenKind::RBrace => f.write_str("`}`"),
            TokenKind::LBracket => f.write_str("`[`"),
            TokenKind::RBracket => f.write_str("`]`"),
            TokenKind::Comma => f.write_str("`,`"),
            TokenKind::Semicolon => f.write_str("`;`"),
            TokenKind::Colon => f.write_str("`:`"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Token {
    pub kind: TokenKind,
    pub span: SourceSpan,
}

struct Cursor<'a> {
    chars: std::iter::Peekable<std::str::Chars<'a>>,
    line: usize,
    column: usize,
}

impl Cursor<'_> {
    fn peek(&mut self) -> Option<char> {
        self.chars.peek().copied()
    }

    fn bump(&mut self) -> Option<char> {
        let c = self.chars.next()?;
        if c == '\n' {
            self.line += 1;
            self.column = 1;
        } else {
            self.column += 1;
        }
        Some(c)
    }
}

fn lex_error(span: SourceSpan, message: impl Into<String>) -> Finding {
    Finding::error(rules::SYNTAX_LEX, "input", message).with_span(span)
}

/// Splits DSL text into tokens. Comments (`#` to end of line) and whitespace
/// are dropped.
pub fn tokenize(text: &str) -> Result<Vec<Token>, Finding> {
    let mut cur = Cursor {
        chars: text.chars().peekable(),
        line: 1,
        column: 1,
    };
    let mut tokens = Vec::new();

    while let Some(c) = cur.peek() {
        let (line, column) = (cur.line, cur.column);
        let single = |kind| Token {
            kind,
            span: SourceSpan::new(line, column, 1),
        };
        match c {
            c if c.is_whitespace() => {
                cur.bump();
            }
            '#' => {
                while cur.peek().is_some_and(|c| c != '\n') {
                    cur.bump();
                }
            }
            '{' | '}' | '[' | ']' | ',' | ';' | ':' => {
                cur.bump();
                tokens.push(single(match c {
                    '{' => TokenKind::LBrace,
                    '}' => TokenKind::RBrace,
                    '[' => TokenKind::LBracket,
                    ']' => TokenKind::RBracket,
                    ',' => TokenKind::Comma,
                    ';' => TokenKind::Semicolon,
                    _ => TokenKind::Colon,
                }));
            }
            '"' => {
                cur.bump();
                let mut value = String::new();
                let mut width = 1;
                loop {
                    match cur.peek() {
                        None | Some('\n') => {
                            return Err(lex_error(
                                SourceSpan::new(line, column, width),
                                "unterminated string literal",
                            ))
                        }
                        Some('"') => {
                            cur.bump();
                            width += 1;
                            break;
                        }
                        Some('\\') => {
                            cur.bump();
                            width += 1;
                            match cur.peek() {
                                Some(e @ ('"' | '\\')) => {
                                    cur.bump();
                                    width += 1;
                                    value.push(e);
                                }
                                _ => {
                                    return Err(lex_error(
                                        SourceSpan::new(cur.line, cur.column - 1, 1),
                                        "invalid escape (only \\\" and \\\\ are allowed)",
                                    ))
                                }
                            }
                        }
                        Some(ch) => {
                            cur.bump();
                            width += 1;
                            value.push(ch);
                        }
                    }
                }
                tokens.push(Token {
                    kind: TokenKind::Str(value),
                    span: SourceSpan::new(line, column, width),
                });
            }
            c if c.is_ascii_alphabetic() || c == '_' => {
                let mut word = String::new();
                while let Some(ch) = cur.peek().filter(|&ch| is_word_char(ch)) {
                    cur.bump();
                    word.push(ch);
                }
                let span = SourceSpan::new(line, column, word.chars().count());
                tokens.push(Token {
                    kind: classify_word(word),
                    span,
                });
            }
            other => {
                return Err(lex_error(
                    SourceSpan::new(line, column, 1),
                    format!("unexpected character {other:?}"),
                ))
            }
        }
    }
    Ok(tokens)
}

fn is_word_char(c: char) -> bool {
    c.is_ascii_alphanumeric() || c == '_' || c == '-'
}

fn classify_word(word: String) -> TokenKind {
    if let Some(k) = Keyword::lookup(&word) {
        return TokenKind::Keyword(k);
    }
    if let Some(digits) = word.strip_prefix("NFR") {
        if !digits.is_empty() && digits.bytes().all(|b| b.is_ascii_digit()) {
            // out-of-range values saturate and are rejected during resolution
            return TokenKind::NfrKey(digits.parse().unwrap_or(u32::MAX));
        }
    }
    TokenKind::Ident(word)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn kinds(text: &str) -> Vec<TokenKind> {
        tokenize(text).unwrap().into_iter().map(|t| t.kind).collect()
    }

    #[test]
    fn empty_input() {
        assert!(tokenize("").unwrap().is_empty());
        assert!(tokenize("  # just a comment\n\n").unwrap().is_empty());
    }

    #[test]
    fn actor_header() {
        assert_eq!(
            kinds(r#"actor issuer "uni" {}"#),
            [
                TokenKind::Keyword(Keyword::Actor),
                TokenKind::Keyword(Keyword::Issuer),
                TokenKind::Str("uni".into()),
                TokenKind::LBrace,
                TokenKind::RBrace,
            ]
        );
    }

    #[test]
    fn nfr_keys_and_idents() {
        assert_eq!(
            kinds("NFR1 NFR25 NFRx A B nfr1"),
            [
                TokenKind::NfrKey(1),
                TokenKind::NfrKey(25),
                TokenKind::Ident("NFRx".into()),
                TokenKind::Ident("A".into()),
                TokenKind::Ident("B".into()),
                TokenKind::Ident("nfr1".into()),
            ]
        );
        assert_eq!(kinds("NFR99999999999999"), [TokenKind::NfrKey(u32::MAX)]);
    }

    #[test]
    fn spans_are_one_based() {
        let toks = tokenize("system \"x\" {\n  # c\n  }").unwrap();
        assert_eq!(toks[0].span, SourceSpan::new(1, 1, 6));
        assert_eq!(toks[1].span, SourceSpan::new(1, 8, 3));
        assert_eq!(toks[2].span, SourceSpan::new(1, 12, 1));
        assert_eq!(toks[3].span, SourceSpan::new(3, 3, 1));
    }

    #[test]
    fn string_escapes() {
        assert_eq!(kinds(r#""a\"b\\c""#), [TokenKind::Str("a\"b\\c".into())]);
        assert!(tokenize(r#""bad\n""#).is_err());
    }

    #[test]
    fn unterminated_string() {
        let e = tokenize("\"unclosed").unwrap_err();
        assert_eq!(e.rule, rules::SYNTAX_LEX);
        assert_eq!(e.span.unwrap().line, 1);
        assert!(e.span.unwrap().is_within("\"unclosed"));
    }

    #[test]
    fn unexpected_character() {
        let e = tokenize("system @").unwrap_err();
        assert_eq!(e.span, Some(SourceSpan::new(1, 8, 1)));
    }
}
