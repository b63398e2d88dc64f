"""Compiled batch simulator used by the enumerator.

Mirrors :mod:`aidepth.upm` opcode for opcode; ``tests/test_kernel.py`` holds
the two paths against each other.
"""
from __future__ import annotations

import numpy as np
from numba import njit

HALTED, OUT_OF_GAS, DIVERGED_STATIC, MALFORMED = 0, 1, 2, 3

_JZ, _JNZ, _HALT = 4, 5, 6
_LEFT, _RIGHT, _FLIP, _OUT = 0, 1, 2, 3


@njit(cache=True)
def simulate_block(k, start, stop, t_max, status, steps, out_len, out_chars):
    """Run body indices ``start..stop-1`` of size ``k`` for ``t_max`` steps.

    Row ``i`` of the output arrays describes body ``start + i``. Output bits
    land in ``out_chars`` as ASCII ``'0'``/``'1'`` codes.
    """
    ops = np.empty(k, np.int64)
    partner = np.empty(k, np.int64)
    stack = np.empty(k, np.int64)
    seen = np.empty(k, np.bool_)
    todo = np.empty(2 * k + 2, np.int64)
    width = 2 * t_max + 3
    tape = np.zeros(width, np.uint8)
    origin = t_max + 1

    for idx in range(start, stop):
        row = idx - start
        steps[row] = 0
        out_len[row] = 0
        for j in range(k):
            ops[j] = (idx >> (3 * (k - 1 - j))) & 7
            partner[j] = -1
            seen[j] = False

        sp = 0
        for j in range(k):
            if ops[j] == _JZ:
                stack[sp] = j
                sp += 1
            elif ops[j] == _JNZ and sp > 0:
                sp -= 1
                partner[j] = stack[sp]
                partner[stack[sp]] = j

        # static reachability, branches taken both ways
        malformed = False
        halt_live = False
        top = 1
        todo[0] = 0
        while top > 0:
            top -= 1
            i = todo[top]
            if i >= k or seen[i]:
                continue
            seen[i] = True
            op = ops[i]
            if op == _HALT:
                halt_live = True
                continue
            if op == _JZ or op == _JNZ:
                if partner[i] < 0:
                    malformed = True
                    continue
                todo[top] = i + 1
                todo[top + 1] = partner[i] + 1
                top += 2
            else:
                todo[top] = i + 1
                top += 1
        if malformed:
            status[row] = MALFORMED
            continue
        if not halt_live:
            status[row] = DIVERGED_STATIC
            continue

        ip = 0
        head = origin
        lo = origin
        hi = origin
        n_steps = 0
        n_out = 0
        result = OUT_OF_GAS
        while True:
            if ip >= k:
                result = DIVERGED_STATIC
                break
            if n_steps >= t_max:
                break
            op = ops[ip]
            cell = tape[head]
            n_steps += 1
            ip += 1
            if op == _LEFT:
                head -= 1
                if head < lo:
                    lo = head
            elif op == _RIGHT:
                head += 1
                if head > hi:
                    hi = head
            elif op == _FLIP:
                tape[head] = cell ^ 1
            elif op == _OUT:
                out_chars[row, n_out] = 48 + cell
                n_out += 1
            elif op == _JZ:
                if cell == 0:
                    ip = partner[ip - 1] + 1
            elif op == _JNZ:
                if cell == 1:
                    ip = partner[ip - 1] + 1
            elif op == _HALT:
                result = HALTED
                break
        for c in range(lo, hi + 1):
            tape[c] = 0
        status[row] = result
        steps[row] = n_steps
        out_len[row] = n_out
