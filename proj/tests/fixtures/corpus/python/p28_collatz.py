def collatz_length(n):
    steps = 1
    while n != 1:
        if n % 2 == 0:
            n //= 2
        else:
            n = 3 * n + 1
        steps += 1
    return steps


def main():
    limit = int(input())
    best = max(range(1, limit + 1), key=collatz_length)
    print(best, collatz_length(best))


main()
