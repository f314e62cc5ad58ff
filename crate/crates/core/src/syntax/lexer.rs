use std::fmt;

use super::ParseError;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Tok {
    Ident(String),
    Upper(String),
    Num(i64),
    Str(String),
    // keywords
    Let,
    In,
    Where,
    And,
    Case,
    Of,
    End,
    Open,
    If,
    Then,
    Else,
    Meth,
    Eps,
    Null,
    True,
    False,
    Union,
    // punctuation
    Lambda,
    Dot,
    LParen,
    RParen,
    LBracket,
    RBracket,
    LBrace,
    RBrace,
    LSetBrace,
    RSetBrace,
    Comma,
    Bar,
    Arrow,
    Wild,
    Semi,
    SemiSemi,
    // operators
    MapsTo,
    Amp,
    At,
    Assign,
    Cons,
    Append,
    Plus,
    Minus,
    Star,
    Slash,
    SetDiff,
    Bang,
    Eq,
    Ne,
    Lt,
    Gt,
    Le,
    Ge,
    Eof,
}

impl fmt::Display for Tok {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Tok::Ident(s) | Tok::Upper(s) => return write!(f, "identifier `{s}`"),
            Tok::Num(n) => return write!(f, "number {n}"),
            Tok::Str(s) => return write!(f, "string {s:?}"),
            Tok::Let => "let",
            Tok::In => "in",
            Tok::Where => "where",
            Tok::And => "and",
            Tok::Case => "case",
            Tok::Of => "of",
            Tok::End => "end",
            Tok::Open => "open",
            Tok::If => "if",
            Tok::Then => "then",
            Tok::Else => "else",
            Tok::Meth => "meth",
            Tok::Eps => "eps",
            Tok::Null => "null",
            Tok::True => "true",
            Tok::False => "false",
            Tok::Union => "union",
            Tok::Lambda => "\\",
            Tok::Dot => ".",
            Tok::LParen => "(",
            Tok::RParen => ")",
            Tok::LBracket => "[",
            Tok::RBracket => "]",
            Tok::LBrace => "{",
            Tok::RBrace => "}",
            Tok::LSetBrace => "{|",
            Tok::RSetBrace => "|}",
            Tok::Comma => ",",
            Tok::Bar => "|",
            Tok::Arrow => "=>",
            Tok::Wild => "_",
            Tok::Semi => ";",
            Tok::SemiSemi => ";;",
            Tok::MapsTo => "|->",
            Tok::Amp => "&",
            Tok::At => "@",
            Tok::Assign => ":=",
            Tok::Cons => "::",
            Tok::Append => "++",
            Tok::Plus => "+",
            Tok::Minus => "-",
            Tok::Star => "*",
            Tok::Slash => "/",
            Tok::SetDiff => "\\\\",
            Tok::Bang => "!",
            Tok::Eq => "=",
            Tok::Ne => "<>",
            Tok::Lt => "<",
            Tok::Gt => ">",
            Tok::Le => "<=",
            Tok::Ge => ">=",
            Tok::Eof => "end of input",
        };
        write!(f, "`{s}`")
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Pos {
    pub line: usize,
    pub col: usize,
}

#[derive(Debug, Clone)]
pub struct Token {
    pub tok: Tok,
    pub pos: Pos,
}

fn keyword(word: &str) -> Option<Tok> {
    Some(match word {
        "let" => Tok::Let,
        "in" => Tok::In,
        "where" => Tok::Where,
        "and" => Tok::And,
        "case" => Tok::Case,
        "of" => Tok::Of,
        "end" => Tok::End,
        "open" => Tok::Open,
        "if" => Tok::If,
        "then" => Tok::Then,
        "else" => Tok::Else,
        "meth" => Tok::Meth,
        "eps" => Tok::Eps,
        "null" => Tok::Null,
        "true" => Tok::True,
        "false" => Tok::False,
        "union" => Tok::Union,
        "_" => Tok::Wild,
        _ => return None,
    })
}

pub fn is_keyword(word: &str) -> bool {
    keyword(word).is_some()
}

struct Lexer<'a> {
    chars: std::iter::Peekable<std::str::Chars<'a>>,
    line: usize,
    col: usize,
}

impl Lexer<'_> {
    fn peek(&mut self) -> Option<char> {
        self.chars.peek().copied()
    }

    fn bump(&mut self) -> Option<char> {
        let c = self.chars.next()?;
        if c == '\n' {
            self.line += 1;
            self.col = 1;
        } else {
            self.col += 1;
        }
        Some(c)
    }

    fn eat(&mut self, c: char) -> bool {
        if self.peek() == Some(c) {
            self.bump();
            true
        } else {
            false
        }
    }

    fn error(&self, pos: Pos, msg: impl Into<String>) -> ParseError {
        ParseError {
            line: pos.line,
            col: pos.col,
            message: msg.into(),
            expected: Vec::new(),
        }
    }
}

pub fn tokenize(src: &str) -> Result<Vec<Token>, ParseError> {
    let mut lx = Lexer {
        chars: src.chars().peekable(),
        line: 1,
        col: 1,
    };
    let mut out = Vec::new();
    loop {
        // whitespace and `--` comments
        loop {
            match lx.peek() {
                Some(c) if c.is_whitespace() => {
                    lx.bump();
                }
                Some('-') => {
                    let mut ahead = lx.chars.clone();
                    ahead.next();
                    if ahead.peek() == Some(&'-') {
                        while let Some(c) = lx.peek() {
                            if c == '\n' {
                                break;
                            }
                            lx.bump();
                        }
                    } else {
                        break;
                    }
                }
                _ => break,
            }
        }
        let pos = Pos {
            line: lx.line,
            col: lx.col,
        };
        let Some(c) = lx.bump() else {
            out.push(Token { tok: Tok::Eof, pos });
            return Ok(out);
        };
        let tok = match c {
            c if c.is_ascii_digit() => {
                let mut s = String::from(c);
                while let Some(d) = lx.peek().filter(|d| d.is_ascii_digit()) {
                    s.push(d);
                    lx.bump();
                }
                Tok::Num(
                    s.parse()
                        .map_err(|_| lx.error(pos, format!("number literal {s} out of range")))?,
                )
            }
            c if c.is_alphabetic() || c == '_' => {
                let mut s = String::from(c);
                while let Some(d) = lx
                    .peek()
                    .filter(|d| d.is_alphanumeric() || *d == '_' || *d == '\'')
                {
                    s.push(d);
                    lx.bump();
                }
                if let Some(k) = keyword(&s) {
                    k
                } else if c.is_uppercase() {
                    Tok::Upper(s)
                } else {
                    Tok::Ident(s)
                }
            }
            '"' => {
                let mut s = String::new();
                loop {
                    match lx.bump() {
                        None => return Err(lx.error(pos, "unterminated string literal")),
                        Some('"') => break,
                        Some('\\') => match lx.bump() {
                            Some('"') => s.push('"'),
                            Some('\\') => s.push('\\'),
                            _ => {
                                return Err(lx.error(pos, "only \\\" and \\\\ escapes are allowed"))
                            }
                        },
                        Some(c) => s.push(c),
                    }
                }
                Tok::Str(s)
            }
            '\\' => {
                if lx.eat('\\') {
                    Tok::SetDiff
                } else {
                    Tok::Lambda
                }
            }
            '.' => Tok::Dot,
            '(' => Tok::LParen,
            ')' => Tok::RParen,
            '[' => Tok::LBracket,
            ']' => Tok::RBracket,
            '{' => {
                if lx.eat('|') {
                    Tok::LSetBrace
                } else {
                    Tok::LBrace
                }
            }
            '}' => Tok::RBrace,
            ',' => Tok::Comma,
            '|' => {
                if lx.eat('}') {
                    Tok::RSetBrace
                } else if lx.peek() == Some('-') {
                    lx.bump();
                    if !lx.eat('>') {
                        return Err(lx.error(pos, "expected `|->`"));
                    }
                    Tok::MapsTo
                } else {
                    Tok::Bar
                }
            }
            ';' => {
                if lx.eat(';') {
                    Tok::SemiSemi
                } else {
                    Tok::Semi
                }
            }
            '&' => Tok::Amp,
            '@' => Tok::At,
            ':' => {
                if lx.eat('=') {
                    Tok::Assign
                } else if lx.eat(':') {
                    Tok::Cons
                } else {
                    return Err(lx.error(pos, "expected `:=` or `::`"));
                }
            }
            '+' => {
                if lx.eat('+') {
                    Tok::Append
                } else {
                    Tok::Plus
                }
            }
            '-' => Tok::Minus,
            '*' => Tok::Star,
            '/' => Tok::Slash,
            '!' => Tok::Bang,
            '=' => {
                if lx.eat('>') {
                    Tok::Arrow
                } else {
                    Tok::Eq
                }
            }
            '<' => {
                if lx.eat('>') {
                    Tok::Ne
                } else if lx.eat('=') {
                    Tok::Le
                } else {
                    Tok::Lt
                }
            }
            '>' => {
                if lx.eat('=') {
                    Tok::Ge
                } else {
                    Tok::Gt
                }
            }
            other => return Err(lx.error(pos, format!("unexpected character `{other}`"))),
        };
        out.push(Token { tok, pos });
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn toks(src: &str) -> Vec<Tok> {
        tokenize(src).unwrap().into_iter().map(|t| t.tok).collect()
    }

    #[test]
    fn ascii_glyphs() {
        assert_eq!(
            toks(r#"\x. "k" |-> x & {} @ "k" := {||} \\ a"#),
            vec![
                Tok::Lambda,
                Tok::Ident("x".into()),
                Tok::Dot,
                Tok::Str("k".into()),
                Tok::MapsTo,
                Tok::Ident("x".into()),
                Tok::Amp,
                Tok::LBrace,
                Tok::RBrace,
                Tok::At,
                Tok::Str("k".into()),
                Tok::Assign,
                Tok::LSetBrace,
                Tok::RSetBrace,
                Tok::SetDiff,
                Tok::Ident("a".into()),
                Tok::Eof
            ]
        );
    }

    #[test]
    fn comments_and_positions() {
        let ts = tokenize("-- header\n  x -- trailing\ny").unwrap();
        assert_eq!(ts[0].tok, Tok::Ident("x".into()));
        assert_eq!(ts[0].pos, Pos { line: 2, col: 3 });
        assert_eq!(ts[1].pos, Pos { line: 3, col: 1 });
    }

    #[test]
    fn string_escapes() {
        assert_eq!(toks(r#""a\"b\\""#)[0], Tok::Str("a\"b\\".into()));
        assert!(tokenize(r#""\n""#).is_err());
        assert!(tokenize("\"open").is_err());
    }

    #[test]
    fn constructors_are_capitalised() {
        assert_eq!(toks("K k _")[..3], [Tok::Upper("K".into()), Tok::Ident("k".into()), Tok::Wild]);
    }
}
