"""
Span extraction and ratio-controlled masking
============================================

"""

# Every corruption in this toolkit starts with spans: contiguous pieces
# of text that can be swapped for sentinel tokens. Three units are
# supported; np_ent is the default used to build training inputs.
from negsum import extract_spans

text = ("Guus Hiddink, the Russia and Chelsea coach, has had much to smile "
        "about in his 22-year managerial career. Enjoying success around "
        "the world has made Guus Hiddink one of the most admired bosses.")

for unit in ("token", "sentence", "np_ent"):
    spans = extract_spans(text, unit)
    print(f"{unit}: {len(spans)} spans, first 3: "
          f"{[s.surface for s in spans[:3]]}")

# The mask count rule: a ratio gamma of the available spans, rounded
# half up, with a floor of one so any positive gamma changes the text.
from negsum import mask_count

for gamma in (0.0, 0.05, 0.5, 0.55, 1.0):
    print(f"gamma={gamma}: mask {mask_count(10, gamma)} of 10 spans")

# mask_text bundles extraction, seeded selection, and sentinel
# substitution. The same (text, unit, gamma, seed) always yields the
# same masked string, on any machine.
from negsum import mask_text, unmask

masked = mask_text(text, "np_ent", 0.6, seed=1)
print()
print("masked:", masked.text)
print("masked spans:", [s.surface for s in masked.plan.masked_spans])

# The plan kept alongside the masked text makes the operation
# invertible, which is how round-trip integrity is tested.
assert unmask(masked) == text
print("unmask restores the original byte for byte")
