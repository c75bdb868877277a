import java.util.Scanner;

public class Sieve {
    static int countPrimes(int limit) {
        boolean[] composite = new boolean[limit + 1];
        int count = 0;
        for (int p = 2; p <= limit; p++) {
            if (!composite[p]) {
                count++;
                for (long m = (long) p * p; m <= limit; m += p) {
                    composite[(int) m] = true;
                }
            }
        }
        return count;
    }

    public static void main(String[] args) {
        Scanner in = new Scanner(System.in);
        int limit = in.nextInt();
        System.out.println(countPrimes(limit));
    }
}
