use crate::diagnostics::Position;

#[derive(Debug, Clone, PartialEq)]
pub(crate) enum Tok {
    IriRef(String),
    PName { prefix: String, local: String },
    Blank(String),
    Str(String),
    LangTag(String),
    DoubleCaret,
    Number(String),
    True,
    False,
    A,
    AtPrefix,
    AtBase,
    SparqlPrefix,
    SparqlBase,
    Dot,
    Semicolon,
    Comma,
    LBracket,
    RBracket,
    LParen,
    RParen,
    Eof,
}

impl Tok {
    pub(crate) fn describe(&self) -> String {
        match self {
            Tok::IriRef(i) => format!("IRI <{i}>"),
            Tok::PName { prefix, local } => format!("name '{prefix}:{local}'"),
            Tok::Blank(b) => format!("blank node '_:{b}'"),
            Tok::Str(_) => "string literal".into(),
            Tok::LangTag(t) => format!("language tag '@{t}'"),
            Tok::DoubleCaret => "'^^'".into(),
            Tok::Number(n) => format!("number '{n}'"),
            Tok::True => "'true'".into(),
            Tok::False => "'false'".into(),
            Tok::A => "'a'".into(),
            Tok::AtPrefix => "'@prefix'".into(),
            Tok::AtBase => "'@base'".into(),
            Tok::SparqlPrefix => "'PREFIX'".into(),
            Tok::SparqlBase => "'BASE'".into(),
            Tok::Dot => "'.'".into(),
            Tok::Semicolon => "';'".into(),
            Tok::Comma => "','".into(),
            Tok::LBracket => "'['".into(),
            Tok::RBracket => "']'".into(),
            Tok::LParen => "'('".into(),
            Tok::RParen => "')'".into(),
            Tok::Eof => "end of input".into(),
        }
    }
}

#[derive(Debug, Clone)]
pub(crate) struct Token {
    pub tok: Tok,
    pub pos: Position,
}

#[derive(Debug, Clone)]
pub(crate) struct LexError {
    pub pos: Position,
    pub message: String,
}

pub(crate) struct Lexer<'a> {
    chars: Vec<char>,
    idx: usize,
    pos: Position,
    last_pos: Position,
    _src: &'a str,
}

fn is_name_start(c: char) -> bool {
    c.is_alphabetic() || c == '_'
}

fn is_name_char(c: char) -> bool {
    c.is_alphanumeric() || c == '_' || c == '-' || c == '\u{00B7}'
}

impl<'a> Lexer<'a> {
    pub(crate) fn new(src: &'a str) -> Self {
        Self {
            chars: src.chars().collect(),
            idx: 0,
            pos: Position::START,
            last_pos: Position::START,
            _src: src,
        }
    }

    fn peek(&self) -> Option<char> {
        self.chars.get(self.idx).copied()
    }

    fn peek_at(&self, off: usize) -> Option<char> {
        self.chars.get(self.idx + off).copied()
    }

    fn bump(&mut self) -> Option<char> {
        let c = self.peek()?;
        self.last_pos = self.pos;
        self.idx += 1;
        if c == '\n' {
            self.pos.line += 1;
            self.pos.column = 1;
        } else {
            self.pos.column += 1;
        }
        Some(c)
    }

    fn skip_trivia(&mut self) {
        while let Some(c) = self.peek() {
            if c.is_whitespace() {
                self.bump();
            } else if c == '#' {
                while let Some(c) = self.peek() {
                    if c == '\n' {
                        break;
                    }
                    self.bump();
                }
            } else {
                break;
            }
        }
    }

    pub(crate) fn next_token(&mut self) -> Result<Token, LexError> {
        self.skip_trivia();
        let pos = self.pos;
        let Some(c) = self.peek() else {
            return Ok(Token { tok: Tok::Eof, pos: self.last_pos });
        };
        let err = |message: String| LexError { pos, message };
        let tok = match c {
            '<' => {
                self.bump();
                let mut iri = String::new();
                loop {
                    match self.bump() {
                        Some('>') => break,
                        Some('\\') => iri.push(self.read_uchar(pos)?),
                        Some(c) if c == '\n' || c == ' ' || c == '<' || c == '"' => {
                            return Err(err(format!("invalid character {c:?} in IRI")));
                        }
                        Some(c) => iri.push(c),
                        None => return Err(err("unterminated IRI".into())),
                    }
                }
                Tok::IriRef(iri)
            }
            '"' | '\'' => Tok::Str(self.read_string(c, pos)?),
            '@' => {
                self.bump();
                let mut word = String::new();
                while let Some(c) = self.peek() {
                    if c.is_ascii_alphanumeric() || (c == '-' && !word.is_empty()) {
                        word.push(c);
                        self.bump();
                    } else {
                        break;
                    }
                }
                match word.as_str() {
                    "prefix" => Tok::AtPrefix,
                    "base" => Tok::AtBase,
                    "" => return Err(err("expected a directive or language tag after '@'".into())),
                    _ if word.starts_with(|c: char| c.is_ascii_alphabetic()) && !word.ends_with('-') => {
                        Tok::LangTag(word)
                    }
                    _ => return Err(err(format!("malformed language tag '@{word}'"))),
                }
            }
            '^' => {
                self.bump();
                if self.peek() == Some('^') {
                    self.bump();
                    Tok::DoubleCaret
                } else {
                    return Err(err("expected '^^'".into()));
                }
            }
            '.' if !self.peek_at(1).is_some_and(|d| d.is_ascii_digit()) => {
                self.bump();
                Tok::Dot
            }
            ';' => {
                self.bump();
                Tok::Semicolon
            }
            ',' => {
                self.bump();
                Tok::Comma
            }
            '[' => {
                self.bump();
                Tok::LBracket
            }
            ']' => {
                self.bump();
                Tok::RBracket
            }
            '(' => {
                self.bump();
                Tok::LParen
            }
            ')' => {
                self.bump();
                Tok::RParen
            }
            '_' if self.peek_at(1) == Some(':') => {
                self.bump();
                self.bump();
                let label = self.read_local();
                if label.is_empty() {
                    return Err(err("empty blank node label".into()));
                }
                Tok::Blank(label)
            }
            c if c.is_ascii_digit() || c == '+' || c == '-' || c == '.' => self.read_number(pos)?,
            ':' => {
                self.bump();
                Tok::PName { prefix: String::new(), local: self.read_local() }
            }
            c if is_name_start(c) => {
                let mut word = String::new();
                while let Some(c) = self.peek() {
                    if is_name_char(c) || (c == '.' && self.peek_at(1).is_some_and(is_name_char)) {
                        word.push(c);
                        self.bump();
                    } else {
                        break;
                    }
                }
                if self.peek() == Some(':') {
                    self.bump();
                    Tok::PName { prefix: word, local: self.read_local() }
                } else {
                    match word.as_str() {
                        "a" => Tok::A,
                        "true" => Tok::True,
                        "false" => Tok::False,
                        w if w.eq_ignore_ascii_case("prefix") => Tok::SparqlPrefix,
                        w if w.eq_ignore_ascii_case("base") => Tok::SparqlBase,
                        _ => return Err(err(format!("unexpected bare word '{word}'"))),
                    }
                }
            }
            other => {
                self.bump();
                return Err(err(format!("unexpected character {other:?}")));
            }
        };
        Ok(Token { tok, pos })
    }

    fn read_local(&mut self) -> String {
        let mut local = String::new();
        while let Some(c) = self.peek() {
            if is_name_char(c) || c == ':' {
                local.push(c);
                self.bump();
            } else if c == '.' && self.peek_at(1).is_some_and(|n| is_name_char(n) || n == ':') {
                local.push(c);
                self.bump();
            } else if c == '%'
                && self.peek_at(1).is_some_and(|h| h.is_ascii_hexdigit())
                && self.peek_at(2).is_some_and(|h| h.is_ascii_hexdigit())
            {
                for _ in 0..3 {
                    local.push(self.bump().unwrap_or_default());
                }
            } else if c == '\\' && self.peek_at(1).is_some_and(|e| "_~.-!$&'()*+,;=/?#@%".contains(e)) {
                self.bump();
                local.push(self.bump().unwrap_or_default());
            } else {
                break;
            }
        }
        local
    }

    fn read_number(&mut self, pos: Position) -> Result<Tok, LexError> {
        let mut text = String::new();
        if let Some(sign @ ('+' | '-')) = self.peek() {
            text.push(sign);
            self.bump();
        }
        let mut digits = 0;
        while let Some(c) = self.peek() {
            if c.is_ascii_digit() {
                text.push(c);
                self.bump();
                digits += 1;
            } else if c == '.' && self.peek_at(1).is_some_and(|d| d.is_ascii_digit()) {
                text.push(c);
                self.bump();
            } else if (c == 'e' || c == 'E') && digits > 0 {
                text.push(c);
                self.bump();
                if let Some(sign @ ('+' | '-')) = self.peek() {
                    text.push(sign);
                    self.bump();
                }
            } else {
                break;
            }
        }
        if digits == 0 {
            return Err(LexError { pos, message: format!("malformed number '{text}'") });
        }
        Ok(Tok::Number(text))
    }

    fn read_uchar(&mut self, pos: Position) -> Result<char, LexError> {
        let width = match self.bump() {
            Some('u') => 4,
            Some('U') => 8,
            _ => return Err(LexError { pos, message: "invalid escape in IRI".into() }),
        };
        self.read_hex(width, pos)
    }

    fn read_hex(&mut self, width: usize, pos: Position) -> Result<char, LexError> {
        let mut code = 0u32;
        for _ in 0..width {
            let d = self
                .bump()
                .and_then(|c| c.to_digit(16))
                .ok_or(LexError { pos, message: "invalid unicode escape".into() })?;
            code = code * 16 + d;
        }
        char::from_u32(code).ok_or(LexError { pos, message: "invalid unicode scalar".into() })
    }

    fn read_string(&mut self, quote: char, pos: Position) -> Result<String, LexError> {
        let long = self.peek_at(1) == Some(quote) && self.peek_at(2) == Some(quote);
        let open = if long { 3 } else { 1 };
        for _ in 0..open {
            self.bump();
        }
        let mut out = String::new();
        loop {
            let Some(c) = self.bump() else {
                return Err(LexError { pos, message: "unterminated string literal".into() });
            };
            match c {
                '\\' => {
                    let e = self.bump();
                    out.push(match e {
                        Some('t') => '\t',
                        Some('b') => '\u{8}',
                        Some('n') => '\n',
                        Some('r') => '\r',
                        Some('f') => '\u{c}',
                        Some('"') => '"',
                        Some('\'') => '\'',
                        Some('\\') => '\\',
                        Some('u') => self.read_hex(4, pos)?,
                        Some('U') => self.read_hex(8, pos)?,
                        _ => {
                            return Err(LexError {
                                pos: self.last_pos,
                                message: "invalid escape sequence in string".into(),
                            })
                        }
                    });
                }
                c if c == quote && !long => break,
                c if c == quote && long && self.peek() == Some(quote) && self.peek_at(1) == Some(quote) => {
                    self.bump();
                    self.bump();
                    break;
                }
                '\n' | '\r' if !long => {
                    return Err(LexError { pos, message: "newline in short string literal".into() });
                }
                c => out.push(c),
            }
        }
        Ok(out)
    }
}
