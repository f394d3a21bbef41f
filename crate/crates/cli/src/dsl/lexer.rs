use super::{Diagnostic, Loc};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Tok {
    /// identifiers, numbers and quoted labels
    Word {
        text: String,
        quoted: bool,
    },
    Punct(&'static str),
    Eof,
}

#[derive(Clone, Debug)]
pub struct Token {
    pub tok: Tok,
    pub loc: Loc,
}

const PUNCT: [&str; 14] = [
    "->", "=>", "{", "}", "(", ")", "[", "]", ",", ";", ":", ".", "=", "*",
];

fn word_char(c: char) -> bool {
    c.is_ascii_alphanumeric() || c == '_' || c == '\''
}

pub fn tokenize(text: &str) -> Result<Vec<Token>, Diagnostic> {
    let mut out = Vec::new();
    let (mut line, mut col) = (1, 1);
    let chars: Vec<char> = text.chars().collect();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        let loc = Loc { line, col };
        if c == '\n' {
            line += 1;
            col = 1;
            i += 1;
            continue;
        }
        if c.is_whitespace() {
            col += 1;
            i += 1;
            continue;
        }
        if c == '#' {
            while i < chars.len() && chars[i] != '\n' {
                i += 1;
            }
            continue;
        }
        if c == '"' {
            let mut s = String::new();
            i += 1;
            col += 1;
            loop {
                match chars.get(i) {
                    None | Some('\n') => return Err(Diagnostic::new(loc, "unterminated string")),
                    Some('"') => break,
                    Some(&ch) => s.push(ch),
                }
                i += 1;
                col += 1;
            }
            i += 1;
            col += 1;
            out.push(Token {
                tok: Tok::Word {
                    text: s,
                    quoted: true,
                },
                loc,
            });
            continue;
        }
        if word_char(c) {
            let start = i;
            while i < chars.len() && word_char(chars[i]) {
                i += 1;
            }
            col += i - start;
            out.push(Token {
                tok: Tok::Word {
                    text: chars[start..i].iter().collect(),
                    quoted: false,
                },
                loc,
            });
            continue;
        }
        let rest: String = chars[i..chars.len().min(i + 2)].iter().collect();
        match PUNCT.iter().find(|p| rest.starts_with(*p)) {
            Some(p) => {
                i += p.len();
                col += p.len();
                out.push(Token {
                    tok: Tok::Punct(p),
                    loc,
                });
            }
            None => return Err(Diagnostic::new(loc, format!("unexpected character '{c}'"))),
        }
    }
    out.push(Token {
        tok: Tok::Eof,
        loc: Loc { line, col },
    });
    Ok(out)
}

pub fn is_bare_word(s: &str) -> bool {
    !s.is_empty() && s.chars().all(word_char)
}
