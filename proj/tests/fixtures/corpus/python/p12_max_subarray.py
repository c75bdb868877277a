def max_subarray(values):
    best = values[0]
    current = values[0]
    for v in values[1:]:
        current = max(v, current + v)
        best = max(best, current)
    return best


def main():
    values = list(map(int, input().split()))
    print(max_subarray(values))


main()
