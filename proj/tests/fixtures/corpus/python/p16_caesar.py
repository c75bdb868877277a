def shift_char(ch, k):
    if ch.isupper():
        return chr((ord(ch) - 65 + k) % 26 + 65)
    if ch.islower():
        return chr((ord(ch) - 97 + k) % 26 + 97)
    return ch


def encode(text, k):
    return "".join(shift_char(ch, k) for ch in text)


def main():
    k = int(input())
    print(encode(input(), k))


main()
