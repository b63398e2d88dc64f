"""Reference universal prefix machine.

A program is ``gamma(k) ++ body`` where ``gamma`` is the Elias-gamma code of
the instruction count ``k`` and ``body`` holds ``k`` 3-bit opcodes. The header
is read in full before execution, so the set of well-formed programs (and a
fortiori the set of halting programs) is prefix-free.

Opcodes::

    000 LEFT   head -= 1
    001 RIGHT  head += 1
    010 FLIP   toggle current cell
    011 OUT    append current cell to the output
    100 JZ     if cell == 0 jump past the matching JNZ
    101 JNZ    if cell == 1 jump past the matching JZ
    110 HALT
    111 NOOP

This module is the slow, obviously-correct path. The enumeration engine has
its own compiled kernel that is tested against :func:`run`.
"""
from __future__ import annotations

import enum
from collections import defaultdict
from dataclasses import dataclass, field

LEFT, RIGHT, FLIP, OUT, JZ, JNZ, HALT, NOOP = range(8)
OPCODE_NAMES = ("LEFT", "RIGHT", "FLIP", "OUT", "JZ", "JNZ", "HALT", "NOOP")

ISA_DESCRIPTION = """\
aidepth reference prefix machine v1
header: elias-gamma(k), k >= 1 instructions; body: 3k bits, MSB-first opcodes
000 LEFT head-1
001 RIGHT head+1
010 FLIP cell^=1
011 OUT append cell
100 JZ cell==0 -> ip=match+1
101 JNZ cell==1 -> ip=match+1
110 HALT
111 NOOP
brackets: stack-matched; a statically reachable unmatched bracket is malformed
diverged-static: no HALT statically reachable, or ip passes last instruction
step: every executed instruction costs 1 (HALT included)
tape: bi-infinite, all-zero bits
"""


def fnv1a_64(data: bytes) -> int:
    h = 0xCBF29CE484222325
    for byte in data:
        h ^= byte
        h = (h * 0x100000001B3) & 0xFFFFFFFFFFFFFFFF
    return h


MACHINE_HASH = fnv1a_64(ISA_DESCRIPTION.encode("ascii"))


class MalformedProgram(ValueError):
    pass


class Status(str, enum.Enum):
    HALTED = "halted"
    OUT_OF_GAS = "out_of_gas"
    DIVERGED_STATIC = "diverged_static"
    MALFORMED = "malformed"


def encode_gamma(k: int) -> str:
    if k < 1:
        raise ValueError(f"gamma code needs k >= 1, got {k}")
    b = format(k, "b")
    return "0" * (len(b) - 1) + b


def decode_gamma(bits: str) -> tuple[int, str]:
    """Split ``bits`` into ``(k, rest)``; raises on a truncated header."""
    zeros = 0
    while zeros < len(bits) and bits[zeros] == "0":
        zeros += 1
    end = 2 * zeros + 1
    if end > len(bits):
        raise MalformedProgram(f"truncated gamma header in {bits!r}")
    return int(bits[zeros:end], 2), bits[end:]


def program_length(k: int) -> int:
    """Bit length of any program with ``k`` instructions."""
    return 2 * k.bit_length() - 1 + 3 * k


def match_brackets(ops: tuple[int, ...]) -> list[int]:
    """Partner index for every JZ/JNZ, ``-1`` if unmatched or not a bracket."""
    partner = [-1] * len(ops)
    stack: list[int] = []
    for i, op in enumerate(ops):
        if op == JZ:
            stack.append(i)
        elif op == JNZ and stack:
            j = stack.pop()
            partner[i], partner[j] = j, i
    return partner


def _successors(ops: tuple[int, ...], partner: list[int], i: int) -> tuple[int, ...]:
    op = ops[i]
    if op == HALT:
        return ()
    if op in (JZ, JNZ):
        return (i + 1, partner[i] + 1)
    return (i + 1,)


def reachable(ops: tuple[int, ...], partner: list[int]) -> list[bool]:
    """Instructions reachable from 0 when every branch may go either way.

    Unmatched brackets are treated as dead ends here; callers reject them.
    """
    seen = [False] * len(ops)
    todo = [0]
    while todo:
        i = todo.pop()
        if i >= len(ops) or seen[i]:
            continue
        seen[i] = True
        if ops[i] in (JZ, JNZ) and partner[i] < 0:
            continue
        todo.extend(_successors(ops, partner, i))
    return seen


@dataclass(frozen=True)
class Program:
    bits: str
    ops: tuple[int, ...]
    partner: tuple[int, ...]
    halt_reachable: bool

    @property
    def k(self) -> int:
        return len(self.ops)

    def __len__(self) -> int:
        return len(self.bits)

    def mnemonic(self) -> str:
        return " ".join(OPCODE_NAMES[op] for op in self.ops)


def decode_program(bits: str) -> Program:
    """Parse and statically check a program; raises :class:`MalformedProgram`."""
    if any(c not in "01" for c in bits):
        raise MalformedProgram(f"not a bit string: {bits!r}")
    k, body = decode_gamma(bits)
    if len(body) != 3 * k:
        raise MalformedProgram(f"body has {len(body)} bits, header says {3 * k}")
    ops = tuple(int(body[i:i + 3], 2) for i in range(0, 3 * k, 3))
    partner = match_brackets(ops)
    live = reachable(ops, partner)
    for i, op in enumerate(ops):
        if live[i] and op in (JZ, JNZ) and partner[i] < 0:
            raise MalformedProgram(f"reachable unmatched {OPCODE_NAMES[op]} at {i}")
    halt_reachable = any(live[i] and op == HALT for i, op in enumerate(ops))
    return Program(bits, ops, tuple(partner), halt_reachable)


def assemble(*names: str) -> str:
    """Program bits for a list of opcode mnemonics, e.g. ``assemble("OUT", "HALT")``."""
    body = "".join(format(OPCODE_NAMES.index(n.upper()), "03b") for n in names)
    return encode_gamma(len(names)) + body


@dataclass
class MachineState:
    ip: int = 0
    tape: defaultdict[int, int] = field(default_factory=lambda: defaultdict(int))
    head: int = 0
    output: list[str] = field(default_factory=list)
    steps: int = 0


@dataclass(frozen=True)
class RunOutcome:
    status: Status
    program_length: int
    output: str | None = None
    halt_step: int | None = None

    @property
    def halted(self) -> bool:
        return self.status is Status.HALTED

    def to_json(self) -> dict:
        doc: dict = {"status": self.status.value}
        if self.halted:
            doc["output"] = self.output
            doc["steps"] = self.halt_step
        doc["program_length"] = self.program_length
        return doc


def step(program: Program, state: MachineState) -> bool:
    """Execute one instruction in place; returns True iff it was HALT."""
    op = program.ops[state.ip]
    cell = state.tape[state.head]
    state.steps += 1
    nxt = state.ip + 1
    if op == LEFT:
        state.head -= 1
    elif op == RIGHT:
        state.head += 1
    elif op == FLIP:
        state.tape[state.head] = cell ^ 1
    elif op == OUT:
        state.output.append("1" if cell else "0")
    elif op == JZ:
        if cell == 0:
            nxt = program.partner[state.ip] + 1
    elif op == JNZ:
        if cell == 1:
            nxt = program.partner[state.ip] + 1
    elif op == HALT:
        return True
    state.ip = nxt
    return False


def run(program: Program, step_budget: int) -> RunOutcome:
    if step_budget < 1:
        raise ValueError("step budget must be positive")
    n = len(program.bits)
    if not program.halt_reachable:
        return RunOutcome(Status.DIVERGED_STATIC, n)
    state = MachineState()
    while True:
        if state.ip >= program.k:
            return RunOutcome(Status.DIVERGED_STATIC, n)
        if state.steps >= step_budget:
            return RunOutcome(Status.OUT_OF_GAS, n)
        if step(program, state):
            return RunOutcome(Status.HALTED, n, "".join(state.output), state.steps)


def run_bits(bits: str, step_budget: int) -> RunOutcome:
    """Like :func:`run` but reports malformed input as a status instead of raising."""
    try:
        program = decode_program(bits)
    except MalformedProgram:
        return RunOutcome(Status.MALFORMED, len(bits))
    return run(program, step_budget)
