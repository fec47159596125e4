"""
Tape file codec
A tape is text made of '0' and '1' characters; whitespace is ignored
"""

from pathlib import Path


def parse_tape(text):
    """
    Parse tape text into a list of bits

    Args:
        text: String of '0'/'1' characters, whitespace allowed anywhere

    Returns:
        list: Bits as ints
    """
    bits = []
    for position, char in enumerate(text):
        if char in '01':
            bits.append(1 if char == '1' else 0)
        elif not char.isspace():
            raise ValueError(f"Invalid tape character {char!r} at position {position}")
    return bits


def format_bits(bits, line_width=64):
    """Render bits in the tape format, wrapped every line_width characters"""
    text = ''.join('1' if b else '0' for b in bits)
    if not line_width:
        return text
    return '\n'.join(text[i:i + line_width] for i in range(0, len(text), line_width))


def read_tape(path):
    with open(path, 'r') as f:
        return parse_tape(f.read())


def write_tape(path, bits, line_width=64):
    """Write bits to a tape file (round-trips through read_tape)"""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, 'w') as f:
        f.write(format_bits(bits, line_width))
        f.write('\n')
    return path
