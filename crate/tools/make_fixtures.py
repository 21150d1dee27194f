"""Regenerate the test fixtures under crates/core/tests/fixtures.

    python3 tools/make_fixtures.py

Writes:
  golden/*.html + golden/expected.json   hand-checked formula lists per page
  shard/fixture-20.warc.gz + truth.json  20 crawled pages, 8 of them math
  mathscore/corpus.warc.gz               synthetic MathScore training pages

Everything is deterministic; rerunning produces identical bytes.
"""

import gzip
import io
import json
import random
from pathlib import Path

ROOT = Path(__file__).resolve().parent.parent / "crates" / "core" / "tests" / "fixtures"

MATHJAX_HEAD = '<script src="https://cdn.jsdelivr.net/npm/mathjax@3/es5/tex-mml-chtml.js"></script>'

INTRO = (
    "This note works through a short example step by step, explaining each "
    "idea in plain words before writing down the formula that captures it."
)
OUTRO = (
    "The same reasoning carries over to the general case with only minor "
    "changes, and the exercises at the end of the chapter explore it further."
)


def page(title, body, head=""):
    return f"""<!DOCTYPE html>
<html lang="en">
<head>
<meta charset="utf-8">
<title>{title}</title>
{head}
</head>
<body>
<nav class="site-nav"><a href="/">Home</a> | <a href="/topics">Topics</a> | <a href="/about">About</a></nav>
<div class="sidebar"><h3>Related posts</h3><ul><li><a href="/a">Older post</a></li><li><a href="/b">Newer post</a></li></ul></div>
<article>
<h1>{title}</h1>
<p>{INTRO}</p>
{body}
<p>{OUTRO}</p>
</article>
<footer><p>Copyright 2023 Example Notes. All rights reserved.</p></footer>
</body>
</html>
"""


def span(kind, latex, display=False):
    return {"kind": kind, "latex": latex, "display": display}


GOLDEN = {}


def golden(name, title, body, spans, head=""):
    GOLDEN[name] = (page(title, body, head), spans)


# --- delimited LaTeX rendered by MathJax -----------------------------------
golden(
    "mathjax_inline_dollar",
    "Pythagoras and Euler",
    r"<p>For a right triangle we know that $a^2 + b^2 = c^2$ holds, and the "
    r"famous identity $e^{i\pi} + 1 = 0$ links five constants.</p>",
    [span("mathjax_inline", "a^2 + b^2 = c^2"), span("mathjax_inline", r"e^{i\pi} + 1 = 0")],
    MATHJAX_HEAD,
)
golden(
    "mathjax_inline_paren",
    "Square roots",
    r"<p>The number \(\sqrt{2}\) is irrational, while the sequence "
    r"[itex]x_n = 1/n[/itex] tends to zero as n grows without bound.</p>",
    [span("mathjax_inline", r"\sqrt{2}"), span("mathjax_inline", "x_n = 1/n")],
    MATHJAX_HEAD,
)
golden(
    "mathjax_display_dollars",
    "Two classic sums",
    r"<p>The area under the line is computed by the integral</p>"
    r"<p>$$\int_0^1 x\,dx = \frac{1}{2}$$</p>"
    r"<p>and Gauss summed the first n integers with</p>"
    r"<p>\[\sum_{k=1}^n k = \frac{n(n+1)}{2}\]</p>",
    [
        span("mathjax_display", r"\int_0^1 x\,dx = \frac{1}{2}", True),
        span("mathjax_display", r"\sum_{k=1}^n k = \frac{n(n+1)}{2}", True),
    ],
    MATHJAX_HEAD,
)
golden(
    "mathjax_display_custom",
    "Custom delimiters",
    r"<p>Forum software often uses bracket tags. Energy and mass are related by</p>"
    r"<p>[math]E = mc^2[/math]</p><p>while Newton wrote</p><p>@@F = ma@@</p>",
    [span("mathjax_display", "E = mc^2", True), span("mathjax_display", "F = ma", True)],
    MATHJAX_HEAD + "\n<script>MathJax = { tex: { displayMath: [['@@', '@@']] } };</script>",
)

# --- MathJax script tags ----------------------------------------------------
golden(
    "script_tag_inline_display",
    "Script tags",
    r'<p>Older MathJax pages keep <script type="math/tex">x^2</script> inside script tags, '
    r"including display formulas such as</p>"
    r'<script type="math/tex; mode=display">\sum_i a_i</script>',
    [span("script_tag", "x^2"), span("script_tag", r"\sum_i a_i", True)],
)
golden(
    "script_tag_fractions",
    "Fractions in script tags",
    r'<p>Half of a quantity is <script type="math/tex">\frac{a}{2}</script> and a third '
    r'is <script type="math/tex">\frac{a}{3}</script> of the whole amount.</p>',
    [span("script_tag", r"\frac{a}{2}"), span("script_tag", r"\frac{a}{3}")],
)

# --- MathML with a TeX annotation -------------------------------------------
golden(
    "annotation_inline_block",
    "Annotated MathML",
    '<p>Let <math><semantics><mi>x</mi><annotation encoding="application/x-tex">x</annotation>'
    "</semantics></math> be a real number. Then its half is</p>"
    '<math display="block"><semantics><mfrac><mi>x</mi><mn>2</mn></mfrac>'
    '<annotation encoding="application/x-tex">\\frac{x}{2}</annotation></semantics></math>',
    [span("annotation_tag", "x"), span("annotation_tag", r"\frac{x}{2}", True)],
)
golden(
    "annotation_greek",
    "Greek letters",
    '<p>The angle <math><semantics><mi>θ</mi><annotation encoding="TeX">\\theta</annotation>'
    "</semantics></math> satisfies <math><semantics><mrow><mi>sin</mi><mi>θ</mi></mrow>"
    '<annotation encoding="application/x-tex">\\sin\\theta &lt; 1</annotation></semantics></math> '
    "for every acute triangle considered here.</p>",
    [span("annotation_tag", r"\theta"), span("annotation_tag", r"\sin\theta < 1")],
)

# --- bare MathML, converted ---------------------------------------------------
golden(
    "mathml_sum",
    "Plain MathML",
    "<p>Adding one gives <math><mi>x</mi><mo>+</mo><mn>1</mn></math> and squaring gives "
    "<math><msup><mi>y</mi><mn>2</mn></msup></math> in the expression below.</p>",
    [span("mathml", "x+1"), span("mathml", "y^{2}")],
)
golden(
    "mathml_fraction_root",
    "MathML fractions",
    '<p>The ratio</p><math display="block"><mfrac><mi>a</mi><mi>b</mi></mfrac></math>'
    "<p>is positive, and so is <math><msqrt><mi>n</mi></msqrt></math> whenever n is.</p>",
    [span("mathml", r"\frac{a}{b}", True), span("mathml", r"\sqrt{n}")],
)

# --- images rendered by a LaTeX service ----------------------------------------
golden(
    "img_url_codecogs_google",
    "Rendered images",
    '<p>Older blogs embed images such as <img src="https://latex.codecogs.com/png.latex?\\alpha%2B\\beta"> '
    'and chart images like <img src="http://chart.apis.google.com/chart?cht=tx&amp;chl=x%5E2"> '
    "in running text.</p>",
    [span("img_url", r"\alpha+\beta"), span("img_url", "x^2")],
)
golden(
    "img_url_mimetex",
    "mimeTeX images",
    '<p>Forum posts used <img src="http://www.forkosh.com/mimetex.cgi?a_n"> and '
    '<img src="https://latex.artofproblemsolving.com/render?\\pi%20r^2"> for formulas.</p>',
    [span("img_url", "a_n"), span("img_url", r"\pi r^2")],
)

# --- images whose alt text is LaTeX ---------------------------------------------
golden(
    "img_alt_delimited",
    "Alt text formulas",
    '<p>The root <img src="/eq1.png" alt="$\\sqrt{x}$"> grows slowly, and the '
    'reciprocal <img src="/eq2.png" alt="\\frac{1}{n}"> shrinks toward zero.</p>',
    [span("img_alt", r"\sqrt{x}"), span("img_alt", r"\frac{1}{n}")],
)
golden(
    "img_alt_commands",
    "More alt text",
    '<p>Sets such as <img src="/s.png" alt="\\mathbb{R}^n"> carry a norm written '
    '<img src="/n.png" alt="\\(\\|v\\|\\)"> here. A photo <img src="/cat.jpg" alt="my cat"> is not math.</p>',
    [span("img_alt", r"\mathbb{R}^n"), span("img_alt", r"\|v\|")],
)

# --- alttext attributes and class="tex" -----------------------------------------
golden(
    "alttext_class_tex",
    "Class tex",
    '<p>Wiki pages mark formulas like <img class="tex" src="/a.png" alt="\\pi r^2"> and '
    '<span class="tex" alt="x^3"></span> with a tex class.</p>',
    [span("alttext_class", r"\pi r^2"), span("alttext_class", "x^3")],
)
golden(
    "alttext_mathml",
    "MathML alttext",
    '<p>The line <math alttext="y = mx + b"><mi>y</mi><mo>=</mo><mi>m</mi><mi>x</mi></math> '
    'has slope m, and <math alttext="\\Delta y"><mi>Δ</mi><mi>y</mi></math> is its rise.</p>',
    [span("alttext_class", "y = mx + b"), span("alttext_class", r"\Delta y")],
)

# --- math-container elements ------------------------------------------------------
golden(
    "math_container_inline_display",
    "Containers",
    '<p>Question sites wrap <span class="math-container">$x+y$</span> in containers, and '
    "limits are shown as</p>"
    '<div class="math-container">$$\\lim_{n\\to\\infty} a_n$$</div>',
    [span("math_container", "x+y"), span("math_container", r"\lim_{n\to\infty} a_n", True)],
)
golden(
    "math_container_answers",
    "Container answers",
    '<div class="answer"><p>The derivative of <span class="math-container">$x^n$</span> is '
    '<span class="math-container">$nx^{n-1}$</span> for every natural number n.</p></div>',
    [span("math_container", "x^n"), span("math_container", "nx^{n-1}")],
)

# --- raw LaTeX environments -------------------------------------------------------
golden(
    "env_equation",
    "Equation environments",
    "<p>Einstein's result reads</p><p>\\begin{equation} E = mc^2 \\end{equation}</p>"
    "<p>and the bound</p><p>\\begin{equation*} a &lt; b \\end{equation*}</p>",
    [
        span("env_equation", r"\begin{equation} E = mc^2 \end{equation}", True),
        span("env_equation", r"\begin{equation*} a < b \end{equation*}", True),
    ],
)
golden(
    "env_equation_numbered",
    "Numbered equations",
    "<p>We write the quadratic formula as</p>"
    "<p>\\begin{equation} x = \\frac{-b \\pm \\sqrt{b^2-4ac}}{2a} \\end{equation}</p>"
    "<p>and its discriminant as</p><p>\\begin{equation} D = b^2 - 4ac \\end{equation}</p>",
    [
        span("env_equation", r"\begin{equation} x = \frac{-b \pm \sqrt{b^2-4ac}}{2a} \end{equation}", True),
        span("env_equation", r"\begin{equation} D = b^2 - 4ac \end{equation}", True),
    ],
)
golden(
    "env_align",
    "Aligned equations",
    "<p>Expanding step by step:</p>"
    "<p>\\begin{align} (a+b)^2 &amp;= a^2 + 2ab + b^2 \\end{align}</p>"
    "<p>and similarly</p><p>\\begin{align*} (a-b)^2 &amp;= a^2 - 2ab + b^2 \\end{align*}</p>",
    [
        span("env_align", r"\begin{align} (a+b)^2 &= a^2 + 2ab + b^2 \end{align}", True),
        span("env_align", r"\begin{align*} (a-b)^2 &= a^2 - 2ab + b^2 \end{align*}", True),
    ],
)
golden(
    "env_align_system",
    "Linear systems",
    "<p>The system</p><p>\\begin{align} x + y &amp;= 3 \\end{align}</p>"
    "<p>together with</p><p>\\begin{align} x - y &amp;= 1 \\end{align}</p><p>has one solution.</p>",
    [
        span("env_align", r"\begin{align} x + y &= 3 \end{align}", True),
        span("env_align", r"\begin{align} x - y &= 1 \end{align}", True),
    ],
)

# --- WordPress latex.php images ------------------------------------------------------
golden(
    "wordpress_plugin",
    "WordPress formulas",
    '<p>Blogs hosted on WordPress show <img src="https://s0.wp.com/latex.php?latex=x%5E2&amp;bg=ffffff&amp;fg=000000&amp;s=0" '
    'alt="x^2" class="latex"> as an image, and likewise '
    '<img src="https://s0.wp.com/latex.php?latex=%5Cfrac%7B1%7D%7B2%7D&amp;bg=ffffff" alt="\\frac{1}{2}" class="latex">.</p>',
    [span("wordpress_plugin", "x^2"), span("wordpress_plugin", r"\frac{1}{2}")],
)
golden(
    "wordpress_plugin_selfhosted",
    "Self-hosted WordPress",
    '<p>A self-hosted blog renders <img src="/wp/latex.php?latex=%5Cpi&amp;s=1" alt="\\pi" class="latex"> '
    'and <img src="/wp/latex.php?latex=e%5Ex&amp;s=1" alt="e^x" class="latex"> the same way.</p>',
    [span("wordpress_plugin", r"\pi"), span("wordpress_plugin", "e^x")],
)

# --- the same delimiters with and without MathJax -------------------------------------
GATE_BODY = "<p>Squaring and adding one gives $x^2 + 1$ which is never zero over the reals.</p>"
golden("gate_with_mathjax", "Gating", GATE_BODY, [span("mathjax_inline", "x^2 + 1")], MATHJAX_HEAD)
golden("gate_without_mathjax", "Gating", GATE_BODY, [])


# --- mixed structure: lists, tables, quotes -----------------------------------------
golden(
    "mixed_structure",
    "Formulas in structure",
    r"<ul><li>First, $f(x) = x^2$ is convex.</li><li>Second, $g(x) = -x$ is linear.</li></ul>"
    r"<table><tr><th>n</th><th>value</th></tr><tr><td>1</td><td>$2^1$</td></tr>"
    r"<tr><td>2</td><td>$2^2$</td></tr></table>"
    r"<blockquote><p>Remember that $$\binom{n}{k} = \frac{n!}{k!(n-k)!}$$ counts subsets.</p></blockquote>",
    [
        span("mathjax_inline", "f(x) = x^2"),
        span("mathjax_inline", "g(x) = -x"),
        span("mathjax_inline", "2^1"),
        span("mathjax_inline", "2^2"),
        span("mathjax_display", r"\binom{n}{k} = \frac{n!}{k!(n-k)!}", True),
    ],
    MATHJAX_HEAD,
)


def write_golden():
    out = ROOT / "golden"
    out.mkdir(parents=True, exist_ok=True)
    expected = {}
    for name, (html, spans) in sorted(GOLDEN.items()):
        (out / f"{name}.html").write_text(html, encoding="utf-8")
        expected[name] = spans
    (out / "expected.json").write_text(json.dumps(expected, indent=2, ensure_ascii=False) + "\n", encoding="utf-8")



# --- WARC writing --------------------------------------------------------------------

def warc_record(headers, payload):
    head = "WARC/1.0\r\n" + "".join(f"{k}: {v}\r\n" for k, v in headers)
    head += f"Content-Length: {len(payload)}\r\n\r\n"
    return head.encode() + payload + b"\r\n\r\n"


def record_id(url, kind):
    import hashlib

    h = hashlib.sha1(f"{kind}:{url}".encode()).hexdigest()
    return f"<urn:uuid:{h[:8]}-{h[8:12]}-{h[12:16]}-{h[16:20]}-{h[20:32]}>"


def response(url, date, body, content_type="text/html; charset=utf-8"):
    payload = (
        f"HTTP/1.1 200 OK\r\nContent-Type: {content_type}\r\nContent-Length: {len(body.encode())}\r\n\r\n"
    ).encode() + body.encode("utf-8")
    return warc_record(
        [
            ("WARC-Type", "response"),
            ("WARC-Target-URI", url),
            ("WARC-Date", date),
            ("WARC-Record-ID", record_id(url, "response")),
            ("Content-Type", "application/http; msgtype=response"),
        ],
        payload,
    )


def warcinfo(name):
    payload = b"software: make_fixtures.py\r\nformat: WARC File Format 1.0\r\n"
    return warc_record(
        [
            ("WARC-Type", "warcinfo"),
            ("WARC-Date", "2023-01-01T00:00:00Z"),
            ("WARC-Filename", name),
            ("WARC-Record-ID", record_id(name, "warcinfo")),
            ("Content-Type", "application/warc-fields"),
        ],
        payload,
    )


def write_warc(path, records):
    """One gzip member per record, as crawl archives do."""
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "wb") as f:
        for rec in records:
            buf = io.BytesIO()
            with gzip.GzipFile(fileobj=buf, mode="wb", mtime=0) as gz:
                gz.write(rec)
            f.write(buf.getvalue())


def site(title, body, head="", nav=True):
    navbar = (
        '<nav><a href="/">Home</a> <a href="/latest">Latest</a> <a href="/contact">Contact</a></nav>' if nav else ""
    )
    return f"""<!DOCTYPE html>
<html><head><meta charset="utf-8"><title>{title}</title>{head}</head>
<body>
<div class="masthead"><a href="#main">Skip to content</a></div>
{navbar}
<main id="main">
{body}
</main>
<div class="share-buttons"><a href="#">Share on Facebook</a> <a href="#">Share on Twitter</a></div>
<footer>Powered by ExampleCMS. Copyright 2023. <a href="/privacy">Privacy policy</a></footer>
</body></html>
"""


# --- the 20-page shard ------------------------------------------------------------------

MO_BODY = r"""<h1>Why is the harmonic series divergent?</h1>
<p>I am trying to understand why the harmonic series $\sum_{n=1}^{\infty} \frac{1}{n}$ diverges even though
its terms tend to zero. The terms $\frac{1}{n}$ get smaller and smaller, so my intuition says the sum should be finite.</p>
<p>The classical argument groups the terms in blocks whose lengths double. Each block contributes at least one half, because
$$\frac{1}{2^k+1} + \dots + \frac{1}{2^{k+1}} \geq 2^k \cdot \frac{1}{2^{k+1}} = \frac{1}{2}.$$
Since there are infinitely many blocks, the partial sums grow without bound.</p>
<p>Another proof compares the sum with the integral $\int_1^N \frac{dx}{x} = \log N$, which also tends to infinity.
The comparison works because the function $x \mapsto 1/x$ is decreasing on the positive real numbers.</p>
<p>In fact the partial sums behave like $\log N + \gamma$ where $\gamma$ is the Euler constant, so the divergence is very slow.</p>
"""

SHARD = [
    # (url, date, html, is_math)
    (
        "https://math.stackexchange.com/questions/12345/sum-of-the-first-n-squares",
        "2023-02-01T10:00:00Z",
        site(
            "Sum of the first n squares",
            r"""<h1>Proof that the sum of the first n squares is n(n+1)(2n+1)/6</h1>
<div class="question"><p>How can I prove that <span class="math-container">$\sum_{k=1}^{n} k^2 = \frac{n(n+1)(2n+1)}{6}$</span>
for every positive integer n? I tried a few small cases and the formula always works, but I do not see a proof.</p></div>
<div class="answer"><p>Use induction on n. The base case <span class="math-container">$n=1$</span> is clear because both sides equal one.
For the inductive step, assume the identity holds for n and add the next square to both sides:</p>
<div class="math-container">$$\frac{n(n+1)(2n+1)}{6} + (n+1)^2 = \frac{(n+1)(n+2)(2n+3)}{6}.$$</div>
<p>Expanding both sides shows they agree, which completes the induction and proves the theorem for every integer.</p></div>
<p class="meta">asked by a student, answered by a tutor</p>""",
            '<script type="text/x-mathjax-config">MathJax.Hub.Config({tex2jax: {inlineMath: [["$","$"]]}});</script>',
        ),
        True,
    ),
    (
        "https://mathoverflow.net/questions/777/harmonic-series-divergence",
        "2023-02-01T11:00:00Z",
        site("Harmonic series", MO_BODY, '<script src="https://cdn.example.org/mathjax/tex-chtml.js"></script>'),
        True,
    ),
    (
        "https://en.wikipedia.org/wiki/Quadratic_formula",
        "2023-02-01T12:00:00Z",
        site(
            "Quadratic formula",
            r"""<h1>Quadratic formula</h1>
<p>In elementary algebra, the quadratic formula gives the solutions of a quadratic equation. For the equation
<math><semantics><mrow><mi>a</mi><msup><mi>x</mi><mn>2</mn></msup><mo>+</mo><mi>b</mi><mi>x</mi><mo>+</mo><mi>c</mi><mo>=</mo><mn>0</mn></mrow><annotation encoding="application/x-tex">ax^2+bx+c=0</annotation></semantics></math>
with real coefficients and a nonzero leading coefficient, the two roots are</p>
<math display="block"><semantics><mrow><mi>x</mi></mrow><annotation encoding="application/x-tex">x=\frac{-b\pm\sqrt{b^2-4ac}}{2a}</annotation></semantics></math>
<p>The expression under the square root is called the discriminant. When the discriminant is positive the equation has two
distinct real roots, when it is zero there is exactly one repeated root, and when it is negative the roots are complex conjugates.</p>
<p>The formula can be derived by completing the square, a method that was already known to ancient mathematicians.</p>""",
        ),
        True,
    ),
    (
        "https://terrytao.wordpress.com/2020/05/01/a-remark-on-primes/",
        "2023-02-01T13:00:00Z",
        site(
            "A remark on primes",
            r"""<h1>A remark on prime numbers</h1>
<p>Let <img src="https://s0.wp.com/latex.php?latex=%5Cpi%28x%29&amp;bg=ffffff&amp;fg=000000&amp;s=0" alt="\pi(x)" class="latex"> denote the number
of primes up to a real number x. The prime number theorem asserts that this counting function is asymptotic to
<img src="https://s0.wp.com/latex.php?latex=x%2F%5Clog+x&amp;bg=ffffff&amp;fg=000000&amp;s=0" alt="x/\log x" class="latex">
as x tends to infinity.</p>
<p>In this post we give a short heuristic explanation of this theorem. The idea is that a random integer near x is prime with
probability roughly one over the logarithm of x, and summing these probabilities gives the integral
<img src="https://s0.wp.com/latex.php?latex=%5Cint_2%5Ex+%5Cfrac%7Bdt%7D%7B%5Clog+t%7D&amp;bg=ffffff&amp;fg=000000&amp;s=0" alt="\int_2^x \frac{dt}{\log t}" class="latex">,
which is a better approximation than the simple ratio.</p>
<p>Leave a comment below if you have questions.</p>""",
        ),
        True,
    ),
    (
        "https://www.physicsforums.com/threads/derivative-of-a-product.1000/",
        "2023-02-01T14:00:00Z",
        site(
            "Derivative of a product",
            r"""<h1>Derivative of a product of two functions</h1>
<p>Can someone explain the product rule? My textbook states that for differentiable functions f and g,
[itex]\frac{d}{dx}(fg) = f'g + fg'[/itex], but I do not understand where this comes from.</p>
<p>Write the difference quotient and add and subtract the same term. In the limit this gives</p>
<p>\begin{equation} (fg)'(x) = \lim_{h \to 0} \frac{f(x+h)g(x+h) - f(x)g(x)}{h} = f'(x)g(x) + f(x)g'(x) \end{equation}</p>
<p>because both functions are continuous at the point x, so the derivative of the product exists and has this form.</p>""",
        ),
        True,
    ),
    (
        "https://calculus-notes.example.edu/lectures/limits-and-continuity",
        "2023-02-01T15:00:00Z",
        site(
            "Limits and continuity",
            r"""<h1>Lecture 4: continuous functions</h1>
<p>Theorem. Every polynomial function is continuous. Proof. We prove the theorem by induction on the degree of the polynomial.
The sum and the product of two continuous functions are continuous, so the inductive step follows from the lemma. This completes
the proof of the theorem.</p>
<p>Lemma. If the sequence converges, then its image under a continuous function converges to the image of the limit.
<img src="/img/eq12.png" alt="\lim_{n\to\infty} f(x_n) = f(x)"> Proof. Choose epsilon positive and find delta such that the
inequality holds for every integer larger than the bound. Hence the sequence converges, which proves the lemma.</p>
<p>Corollary. Every polynomial equation of odd degree has a real root. Proof. Apply the intermediate value theorem to the
polynomial on a large interval. Exercise. Prove that the derivative of a polynomial is a polynomial and compute the derivative
of <img src="/img/eq13.png" alt="$x^3 - 2x$">.</p>
<p>Summary in plain TeX: $\lim_{n \to \infty} x_n = x$ implies $\lim_{n \to \infty} f(x_n) = f(x)$.</p>""",
        ),
        True,
    ),
    (
        "https://mo-mirror.example.com/q/777",
        "2023-03-15T09:00:00Z",
        site(
            "Harmonic series (mirror)",
            MO_BODY.replace("In fact the partial sums", "Indeed the partial sums"),
            '<script src="https://cdn.example.org/mathjax/tex-chtml.js"></script>',
        ),
        True,
    ),
    (
        "https://forum.example.com/user/4242/posts",
        "2023-02-01T16:00:00Z",
        site(
            "Posts by a forum member",
            r"""<h1>Geometric series</h1>
<p>For a real number r with absolute value less than one, the geometric series converges and its sum is
$\sum_{k=0}^{\infty} r^k = \frac{1}{1-r}$. To prove this, multiply the partial sum by r and subtract it from itself;
almost every term cancels and the partial sum equals $\frac{1-r^{n+1}}{1-r}$, which tends to the stated limit.</p>
<p>The same trick shows that the series diverges when the absolute value of r is at least one, since the terms do not tend to zero.</p>""",
            '<script src="/static/MathJax.js"></script>',
        ),
        True,
    ),
    # --- non-math pages ---
    (
        "https://www.example-recipes.com/lemon-cake",
        "2023-02-02T08:00:00Z",
        site(
            "Lemon cake",
            """<h1>Easy lemon cake</h1>
<p>This lemon cake is moist, bright and very easy to bake at home. Cream the butter and sugar until pale, then beat in the eggs one
at a time. Fold in the flour and the grated zest of two lemons, pour the batter into a lined tin and bake for forty minutes.</p>
<p>While the cake is still warm, pour over a syrup made from lemon juice and sugar. Let it cool completely before slicing and
serve with a spoonful of cream or a cup of tea in the afternoon.</p>""",
        ),
        False,
    ),
    (
        "https://travel.example.net/journal/lisbon",
        "2023-02-02T09:00:00Z",
        site(
            "Three days in Lisbon",
            """<h1>Three days in Lisbon</h1>
<p>We arrived in Lisbon on a sunny morning and spent the first day walking through the old neighbourhoods, climbing steep streets
lined with colourful tiles. In the evening we listened to music in a small restaurant near the castle.</p>
<p>On the second day we took the tram to the monastery and tasted the famous custard tarts. The last day was reserved for the
beaches, which are only a short train ride from the city centre and perfect for a relaxing afternoon.</p>""",
        ),
        False,
    ),
    (
        "https://sports.example.com/2023/02/cup-final-report",
        "2023-02-02T10:00:00Z",
        site(
            "Cup final report",
            """<h1>Late goal decides the cup final</h1>
<p>The home side won the cup final on Saturday thanks to a header from their captain in the last minute of the match. The visitors
had dominated the first half and hit the post twice, but the goalkeeper kept the score level with several fine saves.</p>
<p>The manager praised the spirit of his players after the game and dedicated the trophy to the supporters who travelled to the
stadium despite the rain. The team will now prepare for the league match next weekend.</p>""",
        ),
        False,
    ),
    (
        "https://www.exemple-cuisine.fr/recettes/tarte-aux-pommes",
        "2023-02-02T11:00:00Z",
        site(
            "Tarte aux pommes",
            """<h1>La tarte aux pommes de ma grand-mère</h1>
<p>Cette tarte aux pommes est simple et délicieuse. Étalez la pâte dans un moule, disposez les pommes coupées en fines tranches et
saupoudrez de sucre. Faites cuire au four pendant trente minutes jusqu'à ce que les pommes soient dorées.</p>
<p>Servez la tarte tiède avec une boule de glace à la vanille. Elle se conserve deux jours dans un endroit frais.</p>""",
        ),
        False,
    ),
    (
        "https://www.beispiel-reisen.de/blog/berlin",
        "2023-02-02T12:00:00Z",
        site(
            "Ein Wochenende in Berlin",
            """<h1>Ein Wochenende in Berlin</h1>
<p>Am Samstag sind wir früh aufgestanden und mit dem Fahrrad durch den Park gefahren. Danach haben wir ein Museum besucht und in
einem kleinen Café zu Mittag gegessen. Am Abend waren wir im Theater und haben ein wunderbares Stück gesehen.</p>
<p>Am Sonntag war das Wetter leider schlecht, deshalb sind wir lange im Hotel geblieben und erst am Nachmittag nach Hause gefahren.</p>""",
        ),
        False,
    ),
    (
        "https://www.ejemplo-noticias.es/deportes/final",
        "2023-02-02T13:00:00Z",
        site(
            "La final",
            """<h1>Un gol en el último minuto decide la final</h1>
<p>El equipo local ganó la final el sábado gracias a un gol de cabeza de su capitán en el último minuto del partido. Los visitantes
dominaron la primera parte, pero el portero mantuvo el empate con varias paradas excelentes.</p>
<p>El entrenador elogió el espíritu de sus jugadores y dedicó el trofeo a los aficionados que viajaron al estadio a pesar de la lluvia.</p>""",
        ),
        False,
    ),
    (
        "https://devblog.example.io/releases/4-2",
        "2023-02-02T14:00:00Z",
        site(
            "Release 4.2",
            """<h1>Release notes for version 4.2</h1>
<p>This release upgrades the bundled MathJax library, fixes a crash when opening very large files, and makes the editor start
faster on older laptops. The settings dialog has been redesigned and now remembers the last tab you used.</p>
<p>We also updated the translations and improved the keyboard shortcuts for people who prefer not to use a mouse. Thanks to
everyone who reported bugs and tested the beta versions over the last few weeks.</p>""",
        ),
        False,
    ),
    (
        "https://www.example-shop.com/products/garden-chair",
        "2023-02-02T15:00:00Z",
        site(
            "Garden chair",
            """<h1>Folding garden chair</h1>
<p>This folding chair is made of weather resistant wood and fits easily in the car boot. The seat is comfortable for long summer
afternoons and the frame is strong enough for everyday use on the patio or at the beach.</p>
<p>Delivery usually takes three to five working days. Customers who bought this chair also looked at our matching table and cushions.</p>""",
        ),
        False,
    ),
    (
        "https://links.example.org/mathjax-resources",
        "2023-02-02T16:00:00Z",
        site(
            "Links",
            "<ul>" + "".join(f'<li><a href="/r/{i}">Resource {i}</a></li>' for i in range(12)) + "</ul>",
            nav=False,
        ),
        False,
    ),
    (
        "https://paste.example.net/raw/9f3a",
        "2023-02-02T17:00:00Z",
        site(
            "Paste 9f3a",
            "<p>MathJax dump</p><pre>"
            + " ".join(f"{(i * 2654435761) % 4294967296:08x}" for i in range(1, 120))
            + "</pre>",
            nav=False,
        ),
        False,
    ),
    (
        "https://weather.example.com/forecast/today",
        "2023-02-02T18:00:00Z",
        site(
            "Weather",
            """<h1>Forecast for today</h1>
<p>Cloudy in the morning with light rain spreading from the west during the afternoon. Winds will be moderate and temperatures
slightly below the seasonal average. The rain should clear overnight, leaving a bright and cold start tomorrow.</p>""",
        ),
        False,
    ),
    ("https://empty.example.com/", "2023-02-02T19:00:00Z", "", False),
]


def write_shard():
    out = ROOT / "shard"
    records = [warcinfo("fixture-20.warc.gz")]
    for url, date, html, _ in SHARD:
        records.append(response(url, date, html))
    records.append(response("https://files.example.com/paper.pdf", "2023-02-03T00:00:00Z", "%PDF-1.4 fake", "application/pdf"))
    write_warc(out / "fixture-20.warc.gz", records)
    truth = {url: is_math for url, _, _, is_math in SHARD}
    (out / "truth.json").write_text(json.dumps(truth, indent=2) + "\n")


# --- MathScore training pages ---------------------------------------------------------------

MATH_OBJECTS = [
    "function", "sequence", "matrix", "polynomial", "series", "integral", "group", "vector space", "set",
    "graph", "random variable", "eigenvalue", "prime number", "integer", "derivative", "limit", "operator",
    "root", "coefficient", "equation", "inequality", "sum", "product", "logarithm", "discriminant",
    "partial sum", "real number", "complex number", "subsequence", "interval", "square", "quadratic",
    "identity", "constant", "variable", "term", "ratio", "divisor", "fraction", "exponent",
]
MATH_ADJ = [
    "continuous", "bounded", "finite", "invertible", "convergent", "symmetric", "positive", "unique",
    "differentiable", "linear", "divergent", "negative", "rational", "irrational", "nonzero", "odd", "even",
    "decreasing", "increasing", "real", "complex", "constant",
]
MATH_SENTENCES = [
    "Let the {o} be {a} and suppose that the {o2} is {a2}.",
    "We now prove that the {o} is {a}.",
    "By the previous lemma, the {o} is {a} on the whole interval.",
    "It follows that every {o} has a {a} {o2}.",
    "Recall the definition of a {a} {o} from the last lecture.",
    "The theorem states that the {o} converges whenever the {o2} is {a}.",
    "Hence the {o} vanishes at this point, which proves the claim.",
    "Taking the limit on both sides yields the following identity.",
    "Substituting this value into the equation gives the result.",
    "This completes the proof of the proposition.",
    "Consider the {o} defined by the formula below.",
    "Suppose for contradiction that the {o} is not {a}.",
    "Then by induction the {o} is {a} for every natural number.",
    "The corollary follows immediately from the theorem.",
    "We compute the {o} explicitly in the following example.",
    "Therefore the {o} satisfies the inequality for all values.",
    "How can I prove that the {o} is {a}?",
    "Use induction on n and assume the identity holds for the previous case.",
    "Both sides of the equation are equal, so the base case is clear.",
    "Expanding the {o} and collecting terms shows that the two sides agree.",
    "The partial sums of the series grow without bound, so the series diverges.",
    "Compare the sum with the integral to estimate the {o}.",
    "Differentiate both sides with respect to x and simplify.",
    "The roots of the quadratic equation are given by the formula.",
    "When the discriminant is {a}, the equation has two distinct roots.",
    "Completing the square gives another derivation of the formula.",
    "The number of primes up to x is approximately x divided by its logarithm.",
    "A random integer is prime with probability roughly one over its logarithm.",
    "The product rule gives the derivative of a product of two functions.",
    "Write the difference quotient and take the limit as h tends to zero.",
    "Multiply the partial sum by r and subtract to find a closed form.",
    "The terms tend to zero but the series still diverges.",
    "Every polynomial of odd degree has at least one real root.",
    "Choose epsilon positive and find delta such that the inequality holds.",
    "The {o} is {a} if and only if the {o2} is {a2}.",
    "Apply the mean value theorem to the {o} on the interval.",
    "The answer follows by applying the formula twice.",
    "Note that the {o} is {a}, so the estimate is sharp.",
]
FORMULAS = [
    r"\frac{a}{b}", r"\sum_{k=1}^{n} k^2", r"\int_0^1 f(x)\,dx", r"\sqrt{x^2+1}", r"\alpha + \beta",
    r"\lim_{n \to \infty} x_n", r"\mathbb{R}^n", r"x \leq y", r"\partial f / \partial x", r"a \cdot b",
    r"x \in A", r"\lambda v", r"\infty", r"\theta", r"\epsilon > 0", r"e^{i\pi}", r"\binom{n}{k}",
]
PLAIN_FORMULAS = ["x+1", "a=b", "n^2", "2x"]
GENERAL_TOPICS = {
    "cooking": [
        "Preheat the oven and butter a large baking dish.",
        "Chop the onions finely and fry them gently in olive oil.",
        "Season the soup with salt and pepper before serving.",
        "This recipe serves four people and takes about an hour.",
        "Add the flour slowly while stirring to avoid lumps.",
        "Leave the dough to rest in a warm place for two hours.",
        "Serve the stew with fresh bread and a green salad.",
        "Beat the eggs with the sugar until the mixture is pale.",
        "Bake the cake until a knife comes out clean.",
        "Pour the sauce over the pasta and sprinkle with cheese.",
    ],
    "travel": [
        "We spent the afternoon exploring the old town on foot.",
        "The hotel was close to the beach and the staff were friendly.",
        "Our flight was delayed, so we arrived late at night.",
        "The view from the top of the hill was breathtaking.",
        "We rented bikes and cycled along the coast for hours.",
        "The museum has a wonderful collection of paintings.",
        "Local markets are the best place to try regional food.",
        "We took the train to a small village in the mountains.",
        "The restaurant near the harbour served excellent fish.",
        "In the evening we listened to music in the square.",
    ],
    "sports": [
        "The team scored twice in the second half to win the match.",
        "The coach was pleased with the effort of the young players.",
        "Fans celebrated in the streets long after the final whistle.",
        "The striker was injured during training and will miss the game.",
        "The league title will be decided on the last weekend of the season.",
        "The goalkeeper made a brilliant save in the final minute.",
        "Tickets for the final sold out within a few hours.",
        "The captain lifted the trophy in front of the supporters.",
        "Rain made the pitch slippery and the game was slow.",
        "The manager praised the spirit of the squad after the victory.",
    ],
    "garden": [
        "Plant the tulip bulbs in autumn before the first frost.",
        "Water the tomatoes every morning during hot weather.",
        "Roses need plenty of sunlight and well drained soil.",
        "Cut back the hedge in early spring to encourage growth.",
        "Compost improves the soil and reduces household waste.",
        "Birds visit the garden more often when there is a feeder.",
        "The lawn turned brown after weeks without rain.",
        "A wooden bench under the apple tree is a lovely place to rest.",
    ],
    "tech": [
        "The new phone has a larger screen and a better camera.",
        "Update your browser to get the latest security fixes.",
        "The laptop battery lasts about ten hours on a single charge.",
        "Many users reported problems after installing the update.",
        "The company announced a new version of its office software.",
        "Backing up your files regularly protects you from data loss.",
        "The app lets you share photos with friends and family.",
        "This release fixes a crash and makes the editor start faster.",
        "The settings dialog has been redesigned for the new version.",
        "Thanks to everyone who reported bugs and tested the beta.",
    ],
    "news": [
        "The city council approved the budget for the new library.",
        "Heavy rain caused flooding in several villages overnight.",
        "The festival attracted thousands of visitors this year.",
        "Local businesses are preparing for the holiday season.",
        "The bridge will be closed for repairs until next month.",
        "Residents were asked to save water during the drought.",
        "The school celebrated its hundredth anniversary on Friday.",
        "Cloudy skies and light rain are expected this afternoon.",
        "Temperatures will stay below the seasonal average this week.",
    ],
    "shopping": [
        "Delivery usually takes three to five working days.",
        "This chair is made of weather resistant wood.",
        "Customers who bought this item also looked at our tables.",
        "Free returns are available within thirty days of purchase.",
        "The jacket is available in four colours and all sizes.",
        "Sign up to receive offers and discounts by email.",
    ],
}


def math_page(rng, i):
    paras = []
    for _ in range(rng.randint(2, 4)):
        sentences = []
        for _ in range(rng.randint(2, 4)):
            t = rng.choice(MATH_SENTENCES)
            sentences.append(
                t.format(o=rng.choice(MATH_OBJECTS), o2=rng.choice(MATH_OBJECTS), a=rng.choice(MATH_ADJ), a2=rng.choice(MATH_ADJ))
            )
            if rng.random() < 0.6 or not sentences[1:]:
                pool = PLAIN_FORMULAS if i % 80 == 0 else FORMULAS
                f = rng.choice(pool)
                sentences.append(f"We have ${f}$." if rng.random() < 0.7 else f"$${f}$$")
        paras.append("<p>" + " ".join(sentences) + "</p>")
    return site(f"Lecture notes {i}", f"<h1>Notes {i}</h1>" + "".join(paras), MATHJAX_HEAD)


def general_page(rng, i):
    topic = rng.choice(sorted(GENERAL_TOPICS))
    paras = []
    for _ in range(rng.randint(2, 4)):
        paras.append("<p>" + " ".join(rng.sample(GENERAL_TOPICS[topic], rng.randint(2, 5))) + "</p>")
    return site(f"{topic.title()} page {i}", f"<h1>{topic.title()} {i}</h1>" + "".join(paras))


def write_mathscore_corpus():
    rng = random.Random(20230901)
    records = [warcinfo("mathscore-corpus.warc.gz")]
    for i in range(400):
        html = math_page(rng, i) if i % 2 == 0 else general_page(rng, i)
        kind = "notes" if i % 2 == 0 else "blog"
        records.append(response(f"https://{kind}{i}.example.com/page/{i}", "2022-12-01T00:00:00Z", html))
    write_warc(ROOT / "mathscore" / "corpus.warc.gz", records)


if __name__ == "__main__":
    write_golden()
    write_shard()
    write_mathscore_corpus()
