use crate::error::{ParseError, Position};

#[derive(Clone, Debug, PartialEq, Eq)]
pub(crate) enum Tok {
    Ident(String),
    Nil,
    Tau,
    Rec,
    Root,
    Hide,
    Let,
    Dot,
    Plus,
    Comma,
    Semi,
    Eq,
    LParen,
    RParen,
    LBrace,
    RBrace,
    LBracket,
    RBracket,
    /// `|[`
    SyncOpen,
    /// `|` (closes a sync set after `]`)
    Bar,
    /// `|>`
    ReadArrow,
    /// `->`
    Arrow,
    Slash,
    Eof,
}

impl Tok {
    pub(crate) fn describe(&self) -> String {
        match self {
            Tok::Ident(s) => format!("identifier `{s}`"),
            Tok::Eof => "end of input".to_string(),
            other => format!("`{}`", other.text()),
        }
    }

    fn text(&self) -> &'static str {
        match self {
            Tok::Nil => "nil",
            Tok::Tau => "tau",
            Tok::Rec => "rec",
            Tok::Root => "root",
            Tok::Hide => "hide",
            Tok::Let => "let",
            Tok::Dot => ".",
            Tok::Plus => "+",
            Tok::Comma => ",",
            Tok::Semi => ";",
            Tok::Eq => "=",
            Tok::LParen => "(",
            Tok::RParen => ")",
            Tok::LBrace => "{",
            Tok::RBrace => "}",
            Tok::LBracket => "[",
            Tok::RBracket => "]",
            Tok::SyncOpen => "|[",
            Tok::Bar => "|",
            Tok::ReadArrow => "|>",
            Tok::Arrow => "->",
            Tok::Slash => "/",
            Tok::Ident(_) | Tok::Eof => "",
        }
    }
}

#[derive(Clone, Debug)]
pub(crate) struct Spanned {
    pub tok: Tok,
    pub pos: Position,
}

pub(crate) fn tokenize(src: &str) -> Result<Vec<Spanned>, ParseError> {
    let chars: Vec<char> = src.chars().collect();
    let mut out = Vec::new();
    let (mut i, mut line, mut col) = (0usize, 1usize, 1usize);

    macro_rules! bump {
        () => {{
            if chars[i] == '\n' {
                line += 1;
                col = 1;
            } else {
                col += 1;
            }
            i += 1;
        }};
    }

    while i < chars.len() {
        let c = chars[i];
        let pos = Position { line, column: col };
        if c.is_whitespace() {
            bump!();
            continue;
        }
        if c == '#' || (c == '/' && chars.get(i + 1) == Some(&'/')) {
            while i < chars.len() && chars[i] != '\n' {
                bump!();
            }
            continue;
        }
        if c.is_ascii_alphabetic() {
            let start = i;
            while i < chars.len() && (chars[i].is_ascii_alphanumeric() || chars[i] == '_' || chars[i] == '\'') {
                bump!();
            }
            let word: String = chars[start..i].iter().collect();
            let tok = match word.as_str() {
                "nil" => Tok::Nil,
                "tau" => Tok::Tau,
                "rec" => Tok::Rec,
                "root" => Tok::Root,
                "hide" => Tok::Hide,
                "let" => Tok::Let,
                _ => Tok::Ident(word),
            };
            out.push(Spanned { tok, pos });
            continue;
        }
        let next = chars.get(i + 1).copied();
        let (tok, len) = match (c, next) {
            ('|', Some('[')) => (Tok::SyncOpen, 2),
            ('|', Some('>')) => (Tok::ReadArrow, 2),
            ('|', _) => (Tok::Bar, 1),
            ('-', Some('>')) => (Tok::Arrow, 2),
            ('.', _) => (Tok::Dot, 1),
            ('+', _) => (Tok::Plus, 1),
            (',', _) => (Tok::Comma, 1),
            (';', _) => (Tok::Semi, 1),
            ('=', _) => (Tok::Eq, 1),
            ('(', _) => (Tok::LParen, 1),
            (')', _) => (Tok::RParen, 1),
            ('{', _) => (Tok::LBrace, 1),
            ('}', _) => (Tok::RBrace, 1),
            ('[', _) => (Tok::LBracket, 1),
            (']', _) => (Tok::RBracket, 1),
            ('/', _) => (Tok::Slash, 1),
            ('_', _) => {
                return Err(ParseError::Syntax {
                    pos,
                    message: "urgency marks are not part of the input language".to_string(),
                })
            }
            _ => {
                return Err(ParseError::Syntax { pos, message: format!("unexpected character `{c}`") })
            }
        };
        for _ in 0..len {
            bump!();
        }
        out.push(Spanned { tok, pos });
    }
    out.push(Spanned { tok: Tok::Eof, pos: Position { line, column: col } });
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn toks(s: &str) -> Vec<Tok> {
        tokenize(s).unwrap().into_iter().map(|t| t.tok).collect()
    }

    #[test]
    fn sync_brackets() {
        assert_eq!(
            toks("X |[a]| Y"),
            [
                Tok::Ident("X".into()),
                Tok::SyncOpen,
                Tok::Ident("a".into()),
                Tok::RBracket,
                Tok::Bar,
                Tok::Ident("Y".into()),
                Tok::Eof
            ]
        );
    }

    #[test]
    fn comments_and_positions() {
        let t = tokenize("# c\n  X = nil // tail\n").unwrap();
        assert_eq!(t[0].pos, Position { line: 2, column: 3 });
        assert_eq!(t.len(), 4);
    }

    #[test]
    fn underscore_is_rejected() {
        let err = tokenize("X = _a.nil").unwrap_err();
        assert!(matches!(err, ParseError::Syntax { pos: Position { line: 1, column: 5 }, .. }));
    }
}
