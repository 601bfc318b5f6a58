#!/usr/bin/env python3
"""Sequences as inspectable text.

Builders emit plain data; the .pseq text format round-trips it. Symbolic
~tau/4 delays bind to seconds when lowered; the parser is canonical, so
there is exactly one spelling of every sequence.
"""

from pulsepol import build_novel, build_pulsepol, mhz
from pulsepol.seqdsl import SeqSyntaxError, lower, parse, render, sequence_to_text

seq = build_pulsepol(mhz(2.0), mhz(50.0), order=3, reps=2, timing="ideal")
text = sequence_to_text(seq)
print("PulsePol, ideal timing:")
print(" ", text)

finite = build_pulsepol(mhz(2.0), mhz(50.0), order=3, reps=2, timing="finite")
print("\nfinite timing (pulse time carved out of the delays):")
print(" ", sequence_to_text(finite))

print("\nNOVEL (the lock is just a very long pulse):")
print(" ", sequence_to_text(build_novel(mhz(2.0), mhz(2.0), 10e-6)))

ast = parse(text)
lowered = lower(ast, tau=seq.tau, rabi=mhz(50.0))
print(f"\nparse -> render round trip exact: {render(ast) == text}")
print(f"lowered back to {len(lowered.elements)} elements, total "
      f"{lowered.total_duration * 1e6:.2f} us")

for bad in ("(pi)_Q", "(180deg)_X", "[ (pi)_X ]^0"):
    try:
        parse(bad)
    except SeqSyntaxError as exc:
        print(f"rejected {bad!r}: {exc}")
