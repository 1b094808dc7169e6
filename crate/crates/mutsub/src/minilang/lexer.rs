//! Hand-written lexer. Tokens carry the 1-based position of their first
//! character; `//` comments run to end of line.

use super::ast::Pos;
use super::parser::ParseError;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TokenKind {
    Ident,
    Int,
    KwFn,
    KwIf,
    KwElse,
    KwWhile,
    KwBreak,
    KwReturn,
    LParen,
    RParen,
    LBrace,
    RBrace,
    Comma,
    Semi,
    Assign,
    Plus,
    Minus,
    Star,
    Slash,
    Percent,
    EqEq,
    NotEq,
    Lt,
    Le,
    Gt,
    Ge,
    AndAnd,
    OrOr,
    Bang,
    Eof,
}

impl TokenKind {
    pub fn describe(self) -> &'static str {
        match self {
            TokenKind::Ident => "identifier",
            TokenKind::Int => "integer literal",
            TokenKind::KwFn => "\"fn\"",
            TokenKind::KwIf => "\"if\"",
            TokenKind::KwElse => "\"else\"",
            TokenKind::KwWhile => "\"while\"",
            TokenKind::KwBreak => "\"break\"",
            TokenKind::KwReturn => "\"return\"",
            TokenKind::LParen => "\"(\"",
            TokenKind::RParen => "\")\"",
            TokenKind::LBrace => "\"{\"",
            TokenKind::RBrace => "\"}\"",
            TokenKind::Comma => "\",\"",
            TokenKind::Semi => "\";\"",
            TokenKind::Assign => "\"=\"",
            TokenKind::Plus => "\"+\"",
            TokenKind::Minus => "\"-\"",
            TokenKind::Star => "\"*\"",
            TokenKind::Slash => "\"/\"",
            TokenKind::Percent => "\"%\"",
            TokenKind::EqEq => "\"==\"",
            TokenKind::NotEq => "\"!=\"",
            TokenKind::Lt => "\"<\"",
            TokenKind::Le => "\"<=\"",
            TokenKind::Gt => "\">\"",
            TokenKind::Ge => "\">=\"",
            TokenKind::AndAnd => "\"&&\"",
            TokenKind::OrOr => "\"||\"",
            TokenKind::Bang => "\"!\"",
            TokenKind::Eof => "end of input",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Token {
    pub kind: TokenKind,
    pub text: String,
    pub pos: Pos,
}

pub fn tokenize(source: &str) -> Result<Vec<Token>, ParseError> {
    let mut tokens = Vec::new();
    let chars: Vec<char> = source.chars().collect();
    let mut i = 0usize;
    let mut line = 1u32;
    let mut col = 1u32;

    macro_rules! push {
        ($kind:expr, $text:expr, $pos:expr, $len:expr) => {{
            tokens.push(Token {
                kind: $kind,
                text: $text,
                pos: $pos,
            });
            i += $len;
            col += $len as u32;
        }};
    }

    while i < chars.len() {
        let c = chars[i];
        let pos = Pos { line, col };
        match c {
            '\n' => {
                i += 1;
                line += 1;
                col = 1;
            }
            c if c.is_whitespace() => {
                i += 1;
                col += 1;
            }
            '/' if chars.get(i + 1) == Some(&'/') => {
                while i < chars.len() && chars[i] != '\n' {
                    i += 1;
                }
                // The newline itself is handled by the '\n' arm.
            }
            '(' => push!(TokenKind::LParen, "(".into(), pos, 1),
            ')' => push!(TokenKind::RParen, ")".into(), pos, 1),
            '{' => push!(TokenKind::LBrace, "{".into(), pos, 1),
            '}' => push!(TokenKind::RBrace, "}".into(), pos, 1),
            ',' => push!(TokenKind::Comma, ",".into(), pos, 1),
            ';' => push!(TokenKind::Semi, ";".into(), pos, 1),
            '+' => push!(TokenKind::Plus, "+".into(), pos, 1),
            '-' => push!(TokenKind::Minus, "-".into(), pos, 1),
            '*' => push!(TokenKind::Star, "*".into(), pos, 1),
            '/' => push!(TokenKind::Slash, "/".into(), pos, 1),
            '%' => push!(TokenKind::Percent, "%".into(), pos, 1),
            '=' if chars.get(i + 1) == Some(&'=') => push!(TokenKind::EqEq, "==".into(), pos, 2),
            '=' => push!(TokenKind::Assign, "=".into(), pos, 1),
            '!' if chars.get(i + 1) == Some(&'=') => push!(TokenKind::NotEq, "!=".into(), pos, 2),
            '!' => push!(TokenKind::Bang, "!".into(), pos, 1),
            '<' if chars.get(i + 1) == Some(&'=') => push!(TokenKind::Le, "<=".into(), pos, 2),
            '<' => push!(TokenKind::Lt, "<".into(), pos, 1),
            '>' if chars.get(i + 1) == Some(&'=') => push!(TokenKind::Ge, ">=".into(), pos, 2),
            '>' => push!(TokenKind::Gt, ">".into(), pos, 1),
            '&' if chars.get(i + 1) == Some(&'&') => push!(TokenKind::AndAnd, "&&".into(), pos, 2),
            '|' if chars.get(i + 1) == Some(&'|') => push!(TokenKind::OrOr, "||".into(), pos, 2),
            '&' | '|' => {
                return Err(ParseError::new(
                    pos,
                    format!("single {c:?} is not an operator; use {}{}", c, c),
                ))
            }
            c if c.is_ascii_digit() => {
                let start = i;
                while i < chars.len() && chars[i].is_ascii_digit() {
                    i += 1;
                }
                let text: String = chars[start..i].iter().collect();
                col += (i - start) as u32;
                tokens.push(Token {
                    kind: TokenKind::Int,
                    text,
                    pos,
                });
            }
            c if c.is_ascii_alphabetic() || c == '_' => {
                let start = i;
                while i < chars.len() && (chars[i].is_ascii_alphanumeric() || chars[i] == '_') {
                    i += 1;
                }
                let text: String = chars[start..i].iter().collect();
                col += (i - start) as u32;
                let kind = match text.as_str() {
                    "fn" => TokenKind::KwFn,
                    "if" => TokenKind::KwIf,
                    "else" => TokenKind::KwElse,
                    "while" => TokenKind::KwWhile,
                    "break" => TokenKind::KwBreak,
                    "return" => TokenKind::KwReturn,
                    _ => TokenKind::Ident,
                };
                tokens.push(Token { kind, text, pos });
            }
            other => {
                return Err(ParseError::new(
                    pos,
                    format!("unexpected character {other:?}"),
                ))
            }
        }
    }
    tokens.push(Token {
        kind: TokenKind::Eof,
        text: String::new(),
        pos: Pos { line, col },
    });
    Ok(tokens)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn kinds(src: &str) -> Vec<TokenKind> {
        tokenize(src).unwrap().into_iter().map(|t| t.kind).collect()
    }

    #[test]
    fn lexes_all_operators() {
        assert_eq!(
            kinds("+ - * / % == != < <= > >= && || ! ="),
            vec![
                TokenKind::Plus,
                TokenKind::Minus,
                TokenKind::Star,
                TokenKind::Slash,
                TokenKind::Percent,
                TokenKind::EqEq,
                TokenKind::NotEq,
                TokenKind::Lt,
                TokenKind::Le,
                TokenKind::Gt,
                TokenKind::Ge,
                TokenKind::AndAnd,
                TokenKind::OrOr,
                TokenKind::Bang,
                TokenKind::Assign,
                TokenKind::Eof,
            ]
        );
    }

    #[test]
    fn keywords_are_not_identifiers() {
        assert_eq!(
            kinds("fn iffy if"),
            vec![TokenKind::KwFn, TokenKind::Ident, TokenKind::KwIf, TokenKind::Eof]
        );
    }

    #[test]
    fn comments_run_to_end_of_line() {
        assert_eq!(
            kinds("x // = 1;\n; //"),
            vec![TokenKind::Ident, TokenKind::Semi, TokenKind::Eof]
        );
    }

    #[test]
    fn tracks_positions() {
        let tokens = tokenize("ab\n  cd").unwrap();
        assert_eq!(tokens[0].pos, Pos { line: 1, col: 1 });
        assert_eq!(tokens[1].pos, Pos { line: 2, col: 3 });
    }

    #[test]
    fn position_after_multichar_tokens() {
        let tokens = tokenize("<= x").unwrap();
        assert_eq!(tokens[1].pos, Pos { line: 1, col: 4 });
    }

    #[test]
    fn rejects_stray_ampersand() {
        let err = tokenize("a & b").unwrap_err();
        assert!(err.to_string().contains("&&"), "{err}");
    }

    #[test]
    fn rejects_unknown_character() {
        let err = tokenize("a $ b").unwrap_err();
        assert_eq!(err.to_string(), "1:3: unexpected character '$'");
    }
}
