import java.util.Scanner;

public class DigitSum {
    static int digitSum(long n) {
        int total = 0;
        while (n > 0) {
            total += n % 10;
            n /= 10;
        }
        return total;
    }

    static int digitalRoot(long n) {
        while (n >= 10) {
            n = digitSum(n);
        }
        return (int) n;
    }

    public static void main(String[] args) {
        Scanner in = new Scanner(System.in);
        long n = in.nextLong();
        System.out.println(digitSum(n) + " " + digitalRoot(n));
    }
}
