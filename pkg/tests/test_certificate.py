import pytest

from silverlab.exceptions import DerivationError
from silverlab.swr import certificate
from silverlab.swr.derivations import check_derivation

CERT = """\
# o(z) < e(x)
streams Y=abcd
let s0 = "adbc" ("ad")
let s1 = "bc" ("ad")
let s2 = "bcadbc" ("ad")
FA perm=(0 2)(1 3) s0 -> s1 ~
SE i=4 j=5 s1 -> s2 <
conclusion <
"""


def test_loads_and_checks():
    d = certificate.loads(CERT)
    assert [s.kind for s in d.steps] == ["FA", "SE"]
    assert d.steps[0].perm.to_text() == "(0 2)(1 3)"
    assert d.conclusion == "<"
    assert str(check_derivation(d)) == "valid: conclusion ≺"


def test_dumps_names_streams_in_order():
    d = certificate.loads(CERT)
    text = certificate.dumps(d, "o(z) < e(x)")
    assert text == CERT
    assert check_derivation(certificate.loads(text)).valid


def test_invalid_steps_load_but_fail_the_check():
    bad = CERT.replace('let s2 = "bcadbc"', 'let s2 = "bcadcb"')
    result = check_derivation(certificate.loads(bad))
    assert not result.valid
    assert result.step == 1


def test_files(tmp_path, corpus):
    fp = tmp_path / "chain.cert"
    certificate.dump(certificate.loads(CERT), str(fp))
    assert check_derivation(certificate.load(str(fp))).valid
    for path in sorted(corpus.glob("*.cert")):
        assert check_derivation(certificate.load(str(path))).valid, path.name


@pytest.mark.parametrize(
    "text",
    [
        "streams Y=abcd\nP s0 -> s1 <\n",
        'let s0 = "a" ("a")\n',
        'streams Y=abcd\nlet s0 = "a" ("a")\nlet s0 = "b" ("a")\nP s0 -> s0 <\n',
        'streams Y=abcd\nlet s0 = "x" ("a")\nP s0 -> s0 <\n',
        "streams Y=abcd\nSE i=1 s0 -> s1 <\n",
        "streams Y=abcd\nconclusion <\n",
        'streams Y=abcd\nlet s0 = "a" ("a")\nFA s0 -> s0 ~\n',
    ],
)
def test_malformed_certificates(text):
    with pytest.raises(DerivationError):
        certificate.loads(text)
