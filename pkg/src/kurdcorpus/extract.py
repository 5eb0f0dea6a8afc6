"""Visible-text extraction from saved news-article HTML.

The heuristics are tag based and site agnostic: markup, scripts, styles and
page chrome (navigation, header/footer, forms) are dropped; block-level
elements become lines.  When the page has an ``<article>`` element only its
content is kept.
"""

from __future__ import annotations

import datetime as _dt
import hashlib
import re
from html.parser import HTMLParser

from .core import Document
from .errors import EmptyExtraction

_SKIP = {
    "script", "style", "noscript", "template", "iframe", "svg", "object",
    "nav", "header", "footer", "aside", "form", "button", "select", "head",
}
_BLOCK = {
    "p", "div", "section", "article", "main", "br", "li", "ul", "ol", "dl",
    "dt", "dd", "table", "tr", "td", "th", "blockquote", "pre", "figure",
    "figcaption", "h1", "h2", "h3", "h4", "h5", "h6", "hr", "title", "body",
}
_HEADINGS = {"h1", "h2", "h3", "h4", "h5", "h6"}
_VOID = {"br", "hr", "img", "meta", "link", "input", "area", "base", "col",
         "embed", "source", "track", "wbr"}

_TOPIC_META = ("article:section", "section", "category", "topic", "article:tag")
_DATE_META = (
    "article:published_time", "date", "pubdate", "publishdate", "publish-date",
    "dc.date", "dc.date.issued", "dcterms.created", "og:published_time",
)
_WS = re.compile(r"\s+")


class _Collector(HTMLParser):
    def __init__(self):
        super().__init__(convert_charrefs=True)
        self.stack: list[tuple[str, bool]] = []
        self.skip_depth = 0
        self.article_depth = 0
        self.seen_article = False
        self.lines: list[str] = []  # all visible lines
        self.article_lines: list[str] = []
        self.current: list[str] = []
        self.title_parts: list[str] = []
        self.in_title = False
        self.heading: str | None = None
        self.heading_parts: list[str] | None = None
        self.meta: dict[str, str] = {}
        self.time_datetime: str | None = None

    # block boundaries flush the running line
    def _flush(self):
        text = _WS.sub(" ", "".join(self.current)).strip()
        self.current = []
        if text:
            self.lines.append(text)
            if self.article_depth:
                self.article_lines.append(text)

    def handle_starttag(self, tag, attrs):
        attrs = {k.lower(): (v or "") for k, v in attrs}
        if tag == "meta":
            key = (attrs.get("property") or attrs.get("name") or attrs.get("itemprop") or "").lower()
            if key and "content" in attrs:
                self.meta.setdefault(key, attrs["content"])
            return
        if tag == "time" and "datetime" in attrs and self.time_datetime is None:
            self.time_datetime = attrs["datetime"]
        if tag == "title":
            self.in_title = True
        if tag in _VOID:
            if tag in _BLOCK and not self.skip_depth:
                self._flush()
            return
        skipped = tag in _SKIP and not (tag == "header" and self.article_depth)
        self.stack.append((tag, skipped))
        if skipped:
            self.skip_depth += 1
        if tag in _BLOCK and not self.skip_depth:
            self._flush()
        if tag == "article":
            self.article_depth += 1
            self.seen_article = True
        if tag in _HEADINGS and self.heading is None and not self.skip_depth:
            self.heading_parts = []

    def handle_endtag(self, tag):
        if tag == "title":
            self.in_title = False
        if tag in _VOID or all(t != tag for t, _ in self.stack):
            return
        # close anything left open inside this element
        while self.stack:
            top, skipped = self.stack.pop()
            if top in _BLOCK and not self.skip_depth:
                self._flush()
            if skipped:
                self.skip_depth -= 1
            if top == "article":
                self.article_depth -= 1
            if top in _HEADINGS and self.heading_parts is not None:
                text = _WS.sub(" ", "".join(self.heading_parts)).strip()
                self.heading = text or None
                self.heading_parts = None
            if top == tag:
                break

    def handle_data(self, data):
        if self.in_title:
            self.title_parts.append(data)
            return
        if self.skip_depth:
            return
        self.current.append(data)
        if self.heading_parts is not None:
            self.heading_parts.append(data)

    def close(self):
        super().close()
        self._flush()


def _iso_date(value: str | None) -> str | None:
    if not value:
        return None
    value = value.strip()
    candidate = value[:-1] + "+00:00" if value.endswith("Z") else value
    try:
        return _dt.datetime.fromisoformat(candidate).date().isoformat()
    except ValueError:
        pass
    try:
        return _dt.date.fromisoformat(value[:10]).isoformat()
    except ValueError:
        return None


def extract_article(html: str | bytes, source: str, doc_id: str | None = None) -> Document:
    """Convert one saved HTML page into a :class:`Document`.

    ``doc_id`` defaults to a digest of the source and extracted text.
    Raises :class:`EmptyExtraction` when nothing visible remains.
    """
    if isinstance(html, bytes):
        html = html.decode("utf-8", errors="replace")
    parser = _Collector()
    parser.feed(html)
    parser.close()

    lines = parser.article_lines if parser.seen_article and parser.article_lines else parser.lines
    text = "\n".join(lines)
    if not text:
        raise EmptyExtraction(f"no visible text in page from {source}")

    title = _WS.sub(" ", "".join(parser.title_parts)).strip() or parser.heading
    topic = next((parser.meta[k].strip() for k in _TOPIC_META if parser.meta.get(k, "").strip()), None)
    date = None
    for key in _DATE_META:
        date = _iso_date(parser.meta.get(key))
        if date:
            break
    if date is None:
        date = _iso_date(parser.time_datetime)

    if doc_id is None:
        digest = hashlib.sha1(f"{source}\n{text}".encode("utf-8")).hexdigest()
        doc_id = digest[:16]
    return Document(id=doc_id, text=text, source=source, topic=topic, title=title or None, date=date)
