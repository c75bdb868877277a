import java.util.Scanner;

public class Fibonacci {
    static long fibMod(int n, long mod) {
        long a = 0;
        long b = 1;
        for (int i = 0; i < n; i++) {
            long next = (a + b) % mod;
            a = b;
            b = next;
        }
        return a;
    }

    public static void main(String[] args) {
        Scanner in = new Scanner(System.in);
        int n = in.nextInt();
        long mod = in.nextLong();
        System.out.println(fibMod(n, mod));
    }
}
