//! A small pull parser for the element structure of XML documents.
//!
//! Recognized: start, end and self-closing tags with attributes, text,
//! comments, CDATA sections and processing instructions. Only the tags
//! matter to callers; everything else is reported as text or skipped.
//! Document type declarations are rejected.

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum XmlEvent<'a> {
    Open(&'a str),
    Close(&'a str),
    /// `<name/>`
    Empty(&'a str),
    /// Character data between markup, CDATA content included.
    Text(&'a str),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum XmlErrorKind {
    #[error("expected </{expected}>, found </{found}>")]
    MismatchedTag { expected: String, found: String },
    #[error("element <{0}> is never closed")]
    UnclosedTag(String),
    #[error("closing tag </{0}> without a matching open tag")]
    UnexpectedClose(String),
    #[error("malformed tag: {0}")]
    MalformedTag(&'static str),
    #[error("unterminated {0}")]
    Unterminated(&'static str),
    #[error("unsupported markup: {0}")]
    Unsupported(&'static str),
    #[error("document has no root element")]
    NoRoot,
    #[error("document has more than one root element")]
    MultipleRoots,
    #[error("text outside the root element")]
    TextOutsideRoot,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("{kind} at byte {offset}")]
pub struct XmlError {
    pub kind: XmlErrorKind,
    pub offset: usize,
}

pub struct PullParser<'a> {
    src: &'a str,
    pos: usize,
    failed: bool,
}

impl<'a> PullParser<'a> {
    pub fn new(src: &'a str) -> Self {
        Self {
            src,
            pos: 0,
            failed: false,
        }
    }

    fn rest(&self) -> &'a str {
        &self.src[self.pos..]
    }

    fn err(&self, kind: XmlErrorKind) -> XmlError {
        XmlError {
            kind,
            offset: self.pos,
        }
    }

    fn skip_past(&mut self, terminator: &str, what: &'static str) -> Result<&'a str, XmlError> {
        match self.rest().find(terminator) {
            Some(i) => {
                let body = &self.rest()[..i];
                self.pos += i + terminator.len();
                Ok(body)
            }
            None => Err(self.err(XmlErrorKind::Unterminated(what))),
        }
    }

    fn skip_ws(&mut self) {
        let trimmed = self.rest().trim_start();
        self.pos = self.src.len() - trimmed.len();
    }

    fn name(&mut self) -> Result<&'a str, XmlError> {
        let rest = self.rest();
        let mut end = 0;
        for (i, ch) in rest.char_indices() {
            let ok = if i == 0 {
                ch.is_alphabetic() || ch == '_' || ch == ':'
            } else {
                is_name_char(ch)
            };
            if !ok {
                break;
            }
            end = i + ch.len_utf8();
        }
        if end == 0 {
            return Err(self.err(XmlErrorKind::MalformedTag("expected a name")));
        }
        self.pos += end;
        Ok(&rest[..end])
    }

    fn eat(&mut self, s: &str) -> bool {
        if self.rest().starts_with(s) {
            self.pos += s.len();
            true
        } else {
            false
        }
    }

    fn start_tag(&mut self) -> Result<XmlEvent<'a>, XmlError> {
        let name = self.name()?;
        loop {
            let before = self.pos;
            self.skip_ws();
            if self.eat("/>") {
                return Ok(XmlEvent::Empty(name));
            }
            if self.eat(">") {
                return Ok(XmlEvent::Open(name));
            }
            if self.rest().is_empty() {
                return Err(self.err(XmlErrorKind::Unterminated("start tag")));
            }
            if self.pos == before {
                return Err(self.err(XmlErrorKind::MalformedTag(
                    "attributes must be separated by whitespace",
                )));
            }
            self.name()?;
            self.skip_ws();
            if !self.eat("=") {
                return Err(self.err(XmlErrorKind::MalformedTag("attribute without value")));
            }
            self.skip_ws();
            let quote = match self.rest().chars().next() {
                Some(q @ ('"' | '\'')) => q,
                _ => return Err(self.err(XmlErrorKind::MalformedTag("unquoted attribute value"))),
            };
            self.pos += 1;
            let value = self.skip_past(if quote == '"' { "\"" } else { "'" }, "attribute value")?;
            if value.contains('<') {
                return Err(self.err(XmlErrorKind::MalformedTag("`<` in attribute value")));
            }
        }
    }

    fn end_tag(&mut self) -> Result<XmlEvent<'a>, XmlError> {
        let name = self.name()?;
        self.skip_ws();
        if !self.eat(">") {
            return Err(self.err(XmlErrorKind::MalformedTag("junk in closing tag")));
        }
        Ok(XmlEvent::Close(name))
    }

    fn step(&mut self) -> Option<Result<XmlEvent<'a>, XmlError>> {
        loop {
            let rest = self.rest();
            if rest.is_empty() {
                return None;
            }
            if !rest.starts_with('<') {
                let end = rest.find('<').unwrap_or(rest.len());
                self.pos += end;
                return Some(Ok(XmlEvent::Text(&rest[..end])));
            }
            let r = if self.eat("<!--") {
                match self.skip_past("-->", "comment") {
                    Ok(_) => continue,
                    Err(e) => Err(e),
                }
            } else if self.eat("<![CDATA[") {
                self.skip_past("]]>", "CDATA section").map(XmlEvent::Text)
            } else if rest.starts_with("<!") {
                Err(self.err(XmlErrorKind::Unsupported("declarations such as <!DOCTYPE>")))
            } else if self.eat("<?") {
                match self.skip_past("?>", "processing instruction") {
                    Ok(_) => continue,
                    Err(e) => Err(e),
                }
            } else if self.eat("</") {
                self.end_tag()
            } else {
                self.pos += 1;
                self.start_tag()
            };
            return Some(r);
        }
    }
}

fn is_name_char(ch: char) -> bool {
    ch.is_alphanumeric() || matches!(ch, '_' | ':' | '-' | '.')
}

impl<'a> Iterator for PullParser<'a> {
    type Item = Result<XmlEvent<'a>, XmlError>;

    fn next(&mut self) -> Option<Self::Item> {
        if self.failed {
            return None;
        }
        let item = self.step();
        if matches!(item, Some(Err(_))) {
            self.failed = true;
        }
        item
    }
}

/// The element tree of a document: parent of each element in document order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ElementTree {
    pub names: Vec<String>,
    pub parent: Vec<Option<usize>>,
}

pub fn parse_element_tree(src: &str) -> Result<ElementTree, XmlError> {
    let mut parser = PullParser::new(src);
    let mut tree = ElementTree {
        names: Vec::new(),
        parent: Vec::new(),
    };
    let mut open: Vec<usize> = Vec::new();
    let mut root_done = false;

    while let Some(event) = parser.next() {
        let offset = parser.pos;
        let fail = |kind| Err(XmlError { kind, offset });
        match event? {
            XmlEvent::Text(t) => {
                if open.is_empty() && !t.trim().is_empty() {
                    return fail(XmlErrorKind::TextOutsideRoot);
                }
            }
            XmlEvent::Open(name) | XmlEvent::Empty(name) if open.is_empty() && root_done => {
                let _ = name;
                return fail(XmlErrorKind::MultipleRoots);
            }
            XmlEvent::Open(name) => {
                tree.names.push(name.to_owned());
                tree.parent.push(open.last().copied());
                open.push(tree.names.len() - 1);
            }
            XmlEvent::Empty(name) => {
                tree.names.push(name.to_owned());
                tree.parent.push(open.last().copied());
                root_done |= open.is_empty();
            }
            XmlEvent::Close(name) => match open.pop() {
                Some(top) if tree.names[top] == name => root_done |= open.is_empty(),
                Some(top) => {
                    return fail(XmlErrorKind::MismatchedTag {
                        expected: tree.names[top].clone(),
                        found: name.to_owned(),
                    })
                }
                None => return fail(XmlErrorKind::UnexpectedClose(name.to_owned())),
            },
        }
    }
    if let Some(&top) = open.last() {
        return Err(XmlError {
            kind: XmlErrorKind::UnclosedTag(tree.names[top].clone()),
            offset: src.len(),
        });
    }
    if tree.names.is_empty() {
        return Err(XmlError {
            kind: XmlErrorKind::NoRoot,
            offset: src.len(),
        });
    }
    Ok(tree)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn kind(src: &str) -> XmlErrorKind {
        parse_element_tree(src).unwrap_err().kind
    }

    #[test]
    fn nested_elements() {
        let t = parse_element_tree("<a><b/><c><d/></c></a>").unwrap();
        assert_eq!(t.names, vec!["a", "b", "c", "d"]);
        assert_eq!(t.parent, vec![None, Some(0), Some(0), Some(2)]);
    }

    #[test]
    fn skips_text_comments_and_pis() {
        let t = parse_element_tree(
            "<?xml version=\"1.0\"?>\n<a>text<!--x--><b/><![CDATA[<no>]]></a>\n",
        )
        .unwrap();
        assert_eq!(t.names, vec!["a", "b"]);
    }

    #[test]
    fn attributes() {
        let t = parse_element_tree(r#"<a x="1" y = 'two>'><b z="&amp;"/></a>"#).unwrap();
        assert_eq!(t.names, vec!["a", "b"]);
        assert_eq!(
            kind("<a x=1></a>"),
            XmlErrorKind::MalformedTag("unquoted attribute value")
        );
        assert_eq!(
            kind("<a x></a>"),
            XmlErrorKind::MalformedTag("attribute without value")
        );
        assert_eq!(
            kind(r#"<a x="1"y="2"></a>"#),
            XmlErrorKind::MalformedTag("attributes must be separated by whitespace")
        );
    }

    #[test]
    fn structural_errors() {
        assert_eq!(
            kind("<a><b></a></b>"),
            XmlErrorKind::MismatchedTag {
                expected: "b".into(),
                found: "a".into()
            }
        );
        assert_eq!(kind("<a><b>"), XmlErrorKind::UnclosedTag("b".into()));
        assert_eq!(
            kind("<a></a></b>"),
            XmlErrorKind::UnexpectedClose("b".into())
        );
        assert_eq!(kind("<a/><b/>"), XmlErrorKind::MultipleRoots);
        assert_eq!(kind("hello<a/>"), XmlErrorKind::TextOutsideRoot);
        assert_eq!(kind("  "), XmlErrorKind::NoRoot);
        assert_eq!(
            kind("<!DOCTYPE a><a/>"),
            XmlErrorKind::Unsupported("declarations such as <!DOCTYPE>")
        );
        assert_eq!(kind("<a><!-- open"), XmlErrorKind::Unterminated("comment"));
        assert_eq!(kind("<a"), XmlErrorKind::Unterminated("start tag"));
        assert_eq!(kind("< a/>"), XmlErrorKind::MalformedTag("expected a name"));
        assert_eq!(kind("<a></a >x"), XmlErrorKind::TextOutsideRoot);
    }

    #[test]
    fn pull_events() {
        let events: Vec<_> = PullParser::new("<r>hi<e/></r>")
            .collect::<Result<_, _>>()
            .unwrap();
        assert_eq!(
            events,
            vec![
                XmlEvent::Open("r"),
                XmlEvent::Text("hi"),
                XmlEvent::Empty("e"),
                XmlEvent::Close("r")
            ]
        );
    }
}
