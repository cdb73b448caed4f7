"""Reference text extraction for the first <article> of an HTML file.

Used to freeze the expected value of the C++ extractor's unit test:
    python3 tools/oracles/article_text.py page.html
"""
import re
import sys
from html.parser import HTMLParser

BLOCK = {"address", "article", "aside", "blockquote", "br", "dd", "div", "dl", "dt", "figcaption", "figure",
         "footer", "h1", "h2", "h3", "h4", "h5", "h6", "header", "hr", "li", "main", "nav", "ol", "p", "pre",
         "section", "table", "td", "th", "tr", "ul"}
SKIP = {"script", "style", "noscript", "template"}
BREAK = "\x00"


class Article(HTMLParser):
    def __init__(self):
        super().__init__(convert_charrefs=True)
        self.depth = 0
        self.skip = 0
        self.done = False
        self.out = []

    def handle_starttag(self, tag, attrs):
        if self.done:
            return
        if tag in SKIP:
            self.skip += 1
        if tag == "article":
            self.depth += 1
        if self.depth and tag in BLOCK:
            self.out.append(BREAK)

    def handle_endtag(self, tag):
        if self.done:
            return
        if tag in SKIP:
            self.skip = max(0, self.skip - 1)
        if self.depth and tag in BLOCK:
            self.out.append(BREAK)
        if tag == "article" and self.depth:
            self.depth -= 1
            self.done = self.depth == 0

    def handle_data(self, data):
        if self.depth and not self.skip and not self.done:
            self.out.append(data)


def extract(html):
    parser = Article()
    parser.feed(html)
    lines = (re.sub(r"\s+", " ", line).strip() for line in "".join(parser.out).split(BREAK))
    return "\n".join(line for line in lines if line)


if __name__ == "__main__":
    with open(sys.argv[1], encoding="utf-8") as f:
        print(repr(extract(f.read())))
