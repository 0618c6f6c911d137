//! Tokens for terms and equation bodies.

use crate::error::Error;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Tok {
    Word(String),
    Sym(String),
    LParen,
    RParen,
    LBracket,
    RBracket,
    Comma,
    Colon,
}

#[derive(Clone, Debug)]
pub struct Token {
    pub tok: Tok,
    /// Byte offset into the source the lexer was given.
    pub offset: usize,
}

const SYM_CHARS: &str = "+*/<>=&|^?~!-.";

fn is_word_start(c: char) -> bool {
    c.is_alphanumeric() || "_#%'@$".contains(c)
}

/// Maps byte offsets of a source text to 1-based line and column.
#[derive(Clone, Debug)]
pub struct LineMap {
    starts: Vec<usize>,
}

impl LineMap {
    pub fn new(src: &str) -> Self {
        let mut starts = vec![0];
        for (i, c) in src.char_indices() {
            if c == '\n' {
                starts.push(i + 1);
            }
        }
        LineMap { starts }
    }

    pub fn locate(&self, offset: usize) -> (usize, usize) {
        let line = match self.starts.binary_search(&offset) {
            Ok(i) => i,
            Err(i) => i - 1,
        };
        (line + 1, offset - self.starts[line] + 1)
    }
}

/// Splits `src` into term tokens. `base` is added to every offset so that
/// positions refer to an enclosing text.
pub fn lex(src: &str, base: usize, lines: &LineMap) -> Result<Vec<Token>, Error> {
    let mut out = Vec::new();
    let chars: Vec<(usize, char)> = src.char_indices().collect();
    let mut i = 0;
    while i < chars.len() {
        let (off, c) = chars[i];
        let offset = base + off;
        if c.is_whitespace() {
            i += 1;
            continue;
        }
        let single = match c {
            '(' => Some(Tok::LParen),
            ')' => Some(Tok::RParen),
            '[' => Some(Tok::LBracket),
            ']' => Some(Tok::RBracket),
            ',' => Some(Tok::Comma),
            ':' => Some(Tok::Colon),
            _ => None,
        };
        if let Some(tok) = single {
            out.push(Token { tok, offset });
            i += 1;
            continue;
        }
        if is_word_start(c) {
            let start = i;
            i += 1;
            while i < chars.len() {
                let ch = chars[i].1;
                let dash_inside = ch == '-'
                    && chars.get(i + 1).is_some_and(|&(_, n)| n.is_alphanumeric())
                    && chars[i - 1].1.is_alphanumeric();
                if is_word_start(ch) || dash_inside {
                    i += 1;
                } else {
                    break;
                }
            }
            let text: String = chars[start..i].iter().map(|&(_, ch)| ch).collect();
            out.push(Token { tok: Tok::Word(text), offset });
            continue;
        }
        if SYM_CHARS.contains(c) {
            let start = i;
            while i < chars.len() && SYM_CHARS.contains(chars[i].1) {
                i += 1;
            }
            let text: String = chars[start..i].iter().map(|&(_, ch)| ch).collect();
            out.push(Token { tok: Tok::Sym(text), offset });
            continue;
        }
        let (line, column) = lines.locate(offset);
        return Err(Error::syntax(line, column, format!("unexpected character {c:?}")));
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn toks(s: &str) -> Vec<Tok> {
        lex(s, 0, &LineMap::new(s)).unwrap().into_iter().map(|t| t.tok).collect()
    }

    #[test]
    fn unspaced_infix() {
        assert_eq!(
            toks("s(0)+W"),
            vec![
                Tok::Word("s".into()),
                Tok::LParen,
                Tok::Word("0".into()),
                Tok::RParen,
                Tok::Sym("+".into()),
                Tok::Word("W".into())
            ]
        );
    }

    #[test]
    fn annotated_and_fresh_variables() {
        assert_eq!(
            toks("#1:[NatSet]"),
            vec![Tok::Word("#1".into()), Tok::Colon, Tok::LBracket, Tok::Word("NatSet".into()), Tok::RBracket]
        );
        assert_eq!(toks("[idem-Coh]")[1], Tok::Word("idem-Coh".into()));
    }

    #[test]
    fn line_map() {
        let m = LineMap::new("ab\ncd");
        assert_eq!(m.locate(0), (1, 1));
        assert_eq!(m.locate(4), (2, 2));
    }
}
