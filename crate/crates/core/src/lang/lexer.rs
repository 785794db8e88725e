use super::{Diagnostic, DiagnosticKind, SourceSpan};

#[derive(Debug, Clone, PartialEq, Eq)]
pub(crate) enum Tok {
    /// Letter or underscore first.
    Ident(String),
    /// Digit first, e.g. `0` or `2b`.
    Value(String),
    LBrace,
    RBrace,
    LParen,
    RParen,
    Colon,
    Comma,
    Assign,
    EqEq,
    Bang,
    Amp,
    Pipe,
    Arrow,
    Eof,
}

impl Tok {
    pub(crate) fn describe(&self) -> String {
        match self {
            Tok::Ident(s) => format!("`{s}`"),
            Tok::Value(s) => format!("value `{s}`"),
            Tok::LBrace => "`{`".into(),
            Tok::RBrace => "`}`".into(),
            Tok::LParen => "`(`".into(),
            Tok::RParen => "`)`".into(),
            Tok::Colon => "`:`".into(),
            Tok::Comma => "`,`".into(),
            Tok::Assign => "`=`".into(),
            Tok::EqEq => "`==`".into(),
            Tok::Bang => "`!`".into(),
            Tok::Amp => "`&`".into(),
            Tok::Pipe => "`|`".into(),
            Tok::Arrow => "`->`".into(),
            Tok::Eof => "end of input".into(),
        }
    }
}

#[derive(Debug, Clone)]
pub(crate) struct Token {
    pub tok: Tok,
    pub span: SourceSpan,
}

/// Splits `src` into tokens, ending with `Eof`. Unknown characters are
/// reported and skipped so later stages still see the rest of the input.
pub(crate) fn tokenize(src: &str) -> (Vec<Token>, Vec<Diagnostic>) {
    let mut tokens = Vec::new();
    let mut diags = Vec::new();
    let mut line = 1;
    let mut col = 1;
    let mut chars = src.char_indices().peekable();

    while let Some(&(start, c)) = chars.peek() {
        let (start_line, start_col) = (line, col);
        let mut bump = |chars: &mut std::iter::Peekable<std::str::CharIndices>| {
            let (_, ch) = chars.next().expect("peeked");
            if ch == '\n' {
                line += 1;
                col = 1;
            } else {
                col += 1;
            }
        };
        if c.is_whitespace() {
            bump(&mut chars);
            continue;
        }
        if c == '#' {
            while let Some(&(_, ch)) = chars.peek() {
                if ch == '\n' {
                    break;
                }
                bump(&mut chars);
            }
            continue;
        }
        let tok = if c.is_ascii_alphanumeric() || c == '_' {
            let mut end = start;
            while let Some(&(i, ch)) = chars.peek() {
                if !(ch.is_ascii_alphanumeric() || ch == '_') {
                    break;
                }
                end = i + ch.len_utf8();
                bump(&mut chars);
            }
            let word = src[start..end].to_string();
            if c.is_ascii_digit() {
                Some(Tok::Value(word))
            } else {
                Some(Tok::Ident(word))
            }
        } else {
            bump(&mut chars);
            let next = chars.peek().map(|&(_, ch)| ch);
            let mut two = |chars: &mut _, t| {
                bump(chars);
                Some(t)
            };
            match (c, next) {
                ('=', Some('=')) => two(&mut chars, Tok::EqEq),
                ('-', Some('>')) => two(&mut chars, Tok::Arrow),
                ('=', _) => Some(Tok::Assign),
                ('{', _) => Some(Tok::LBrace),
                ('}', _) => Some(Tok::RBrace),
                ('(', _) => Some(Tok::LParen),
                (')', _) => Some(Tok::RParen),
                (':', _) => Some(Tok::Colon),
                (',', _) => Some(Tok::Comma),
                ('!', _) => Some(Tok::Bang),
                ('&', _) => Some(Tok::Amp),
                ('|', _) => Some(Tok::Pipe),
                _ => None,
            }
        };
        let end = chars.peek().map_or(src.len(), |&(i, _)| i);
        let span = SourceSpan {
            line: start_line,
            column: start_col,
            start,
            end,
        };
        match tok {
            Some(tok) => tokens.push(Token { tok, span }),
            None => diags.push(Diagnostic::new(
                DiagnosticKind::SyntaxError,
                span,
                format!("unexpected character `{c}`"),
            )),
        }
    }
    tokens.push(Token {
        tok: Tok::Eof,
        span: SourceSpan {
            line,
            column: col,
            start: src.len(),
            end: src.len(),
        },
    });
    (tokens, diags)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn toks(src: &str) -> Vec<Tok> {
        let (t, d) = tokenize(src);
        assert!(d.is_empty(), "{d:?}");
        t.into_iter().map(|t| t.tok).collect()
    }

    #[test]
    fn operators_and_words() {
        assert_eq!(
            toks("X == 1 -> !a_b & 2b | (c)"),
            vec![
                Tok::Ident("X".into()),
                Tok::EqEq,
                Tok::Value("1".into()),
                Tok::Arrow,
                Tok::Bang,
                Tok::Ident("a_b".into()),
                Tok::Amp,
                Tok::Value("2b".into()),
                Tok::Pipe,
                Tok::LParen,
                Tok::Ident("c".into()),
                Tok::RParen,
                Tok::Eof,
            ]
        );
    }

    #[test]
    fn comments_and_positions() {
        let (t, _) = tokenize("# note\n  exo U");
        assert_eq!(t[0].tok, Tok::Ident("exo".into()));
        assert_eq!((t[0].span.line, t[0].span.column), (2, 3));
        assert_eq!(t[1].span.start..t[1].span.end, 13..14);
    }

    #[test]
    fn stray_character_is_reported() {
        let (t, d) = tokenize("a $ b");
        assert_eq!(d.len(), 1);
        assert_eq!(d[0].span.column, 3);
        assert_eq!(t.len(), 3);
    }
}
