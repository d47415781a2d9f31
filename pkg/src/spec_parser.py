import logging
import math
from dataclasses import dataclass, replace

import ply.lex as lex
import ply.yacc as yacc

from .errors import InputError, SpecSyntaxError
from .synth import Event, EventKind, GeneratorDocument, HarmonicSpec, preset as load_preset

logger = logging.getLogger(__name__)

# Lexer Definition
# A generator document is a flat list of `key = value[, value ...]` lines.
tokens = (
    'NUMBER',    # signed decimal or scientific literal
    'WORD',      # keys, preset names, 'none', frame names
    'EQUALS',    # '='
    'COMMA',     # ','
    'NEWLINE',   # one or more line breaks
)

t_EQUALS = r'='
t_COMMA = r','
t_ignore = ' \t\r'
t_ignore_COMMENT = r'\#[^\n]*'


def t_NUMBER(t):
    r'[-+]?(\d+\.?\d*|\.\d+)([eE][-+]?\d+)?'
    t.value = float(t.value)
    return t


def t_WORD(t):
    r'[A-Za-z_][A-Za-z0-9_.\-]*'
    return t


def t_NEWLINE(t):
    r'\n+'
    t.lexer.lineno += len(t.value)
    return t


def t_error(t):
    raise SpecSyntaxError(f"illegal character '{t.value[0]}'", t.lineno)


lexer = lex.lex()


# Parser Definition
# Every rule builds plain Python values; a document is a list of Entry.

@dataclass(frozen=True)
class Entry:
    key: str
    values: tuple
    line: int


def p_document(p):
    '''document : document line
                | empty'''
    if len(p) == 3:
        p[0] = p[1] + ([p[2]] if p[2] is not None else [])
    else:
        p[0] = []


def p_line(p):
    '''line : WORD EQUALS value_list NEWLINE
            | NEWLINE'''
    if len(p) == 5:
        p[0] = Entry(p[1], tuple(p[3]), p.lineno(1))
    else:
        p[0] = None


def p_value_list(p):
    '''value_list : value
                  | value_list COMMA value'''
    if len(p) == 2:
        p[0] = [p[1]]
    else:
        p[0] = p[1] + [p[3]]


def p_value(p):
    '''value : NUMBER
             | WORD'''
    p[0] = p[1]


def p_empty(p):
    'empty :'
    pass


def p_error(p):
    if p:
        shown = '\\n' if p.type == 'NEWLINE' else p.value
        raise SpecSyntaxError(f"unexpected '{shown}'", p.lineno)
    raise SpecSyntaxError("unexpected end of document")


parser = yacc.yacc(debug=False, write_tables=False)


def parse(text):
    """Tokenize and parse a generator document into a list of Entry."""
    if not text.endswith('\n'):
        text += '\n'
    lexer.lineno = 1
    entries = parser.parse(text, lexer=lexer)
    return entries or []


# Document semantics

SCALAR_KEYS = ('preset', 'amplitude', 'frequency', 'phase', 'unbalance', 'noise_std',
               'seed', 'span', 'dt', 'dc', 'frame')
REPEATED_KEYS = ('harmonic', 'dip', 'phase_jump', 'ramp', 'freq_step')

_EVENT_KINDS = {
    'dip': EventKind.DIP,
    'phase_jump': EventKind.PHASE_JUMP,
    'ramp': EventKind.RAMP,
    'freq_step': EventKind.STEP,
}


def _numbers(entry, counts):
    if len(entry.values) not in counts:
        expected = ' or '.join(str(c) for c in counts)
        raise SpecSyntaxError(f"'{entry.key}' takes {expected} value(s), got {len(entry.values)}", entry.line)
    for value in entry.values:
        if not isinstance(value, float):
            raise SpecSyntaxError(f"'{entry.key}' expects numbers, got '{value}'", entry.line)
    return entry.values


def _number(entry):
    return _numbers(entry, (1,))[0]


def _word(entry):
    if len(entry.values) != 1 or not isinstance(entry.values[0], str):
        raise SpecSyntaxError(f"'{entry.key}' takes one name", entry.line)
    return entry.values[0]


def _harmonic(entry):
    values = _numbers(entry, (3, 4))
    sequence = values[3] if len(values) == 4 else 1.0
    if sequence not in (1.0, -1.0):
        raise SpecSyntaxError(f"harmonic sequence must be 1 or -1, got {sequence:g}", entry.line)
    return HarmonicSpec(values[0], values[1], math.radians(values[2]), int(sequence))


def _event(entry):
    kind = _EVENT_KINDS[entry.key]
    if kind == EventKind.STEP:
        start, delta = _numbers(entry, (2,))
        return Event(kind, start, None, delta)
    if kind in (EventKind.PHASE_JUMP, EventKind.RAMP):
        if len(entry.values) == 3 and entry.values[1] == 'none':
            start, value = _numbers(replace(entry, values=(entry.values[0], entry.values[2])), (2,))
            end = None
        else:
            start, end, value = _numbers(entry, (3,))
        if kind == EventKind.PHASE_JUMP:
            value = math.radians(value)
        return Event(kind, start, end, value)
    values = _numbers(entry, (3, 4))
    tau = values[3] if len(values) == 4 else None
    return Event(kind, values[0], values[1], values[2], tau)


def _scalar_overrides(entry):
    key = entry.key
    if key == 'amplitude':
        return 'spec', {'amplitude': _number(entry)}
    if key == 'frequency':
        return 'spec', {'omega': 2.0 * math.pi * _number(entry)}
    if key == 'phase':
        return 'spec', {'phase': math.radians(_number(entry))}
    if key == 'unbalance':
        return 'spec', {'unbalance': _number(entry)}
    if key == 'noise_std':
        return 'spec', {'noise_std': _number(entry)}
    if key == 'dc':
        return 'spec', {'dc': tuple(_numbers(entry, (3,)))}
    if key == 'seed':
        seed = _number(entry)
        if seed != int(seed) or seed < 0:
            raise SpecSyntaxError(f"seed must be a non-negative integer, got {seed:g}", entry.line)
        return 'document', {'seed': int(seed)}
    if key in ('span', 'dt'):
        return 'document', {key: _number(entry)}
    frame = _word(entry)
    if frame not in ('abc', 'alphabeta'):
        raise SpecSyntaxError(f"frame must be 'abc' or 'alphabeta', got '{frame}'", entry.line)
    return 'document', {'frame': frame}


def load_generator_document(text):
    """Build a GeneratorDocument from document text.

    A ``preset`` line selects the starting point wherever it appears. Listed
    harmonics replace the preset's harmonics and listed events replace the
    preset's events of the same kind.
    """
    entries = parse(text)
    seen = {}
    for entry in entries:
        if entry.key not in SCALAR_KEYS and entry.key not in REPEATED_KEYS:
            raise SpecSyntaxError(f"unknown key '{entry.key}'", entry.line)
        if entry.key in SCALAR_KEYS and entry.key in seen:
            raise SpecSyntaxError(f"'{entry.key}' already set on line {seen[entry.key]}", entry.line)
        seen.setdefault(entry.key, entry.line)

    document = GeneratorDocument()
    for entry in entries:
        if entry.key == 'preset':
            try:
                document = load_preset(_word(entry))
            except SpecSyntaxError:
                raise
            except InputError as e:
                raise SpecSyntaxError(str(e), entry.line) from None

    spec_changes, document_changes = {}, {}
    harmonics, events = [], []
    for entry in entries:
        try:
            if entry.key == 'preset':
                continue
            if entry.key == 'harmonic':
                harmonics.append(_harmonic(entry))
            elif entry.key in _EVENT_KINDS:
                events.append(_event(entry))
            else:
                target, changes = _scalar_overrides(entry)
                (spec_changes if target == 'spec' else document_changes).update(changes)
        except SpecSyntaxError:
            raise
        except InputError as e:
            raise SpecSyntaxError(str(e), entry.line) from None

    if harmonics:
        spec_changes['harmonics'] = tuple(harmonics)
    if events:
        listed = {e.kind for e in events}
        kept = tuple(e for e in document.spec.events if e.kind not in listed)
        spec_changes['events'] = kept + tuple(events)
    try:
        spec = replace(document.spec, **spec_changes)
        document = replace(document, spec=spec, **document_changes)
    except InputError as e:
        raise SpecSyntaxError(str(e)) from None
    logger.info("generator document: %d entries, preset=%s", len(entries), document.preset)
    return document
