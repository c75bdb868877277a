import java.util.Arrays;
import java.util.Scanner;

public class RunningSum {
    static long[] runningSum(long[] values) {
        long[] out = new long[values.length];
        long total = 0;
        for (int i = 0; i < values.length; i++) {
            total += values[i];
            out[i] = total;
        }
        return out;
    }

    public static void main(String[] args) {
        Scanner in = new Scanner(System.in);
        int n = in.nextInt();
        long[] values = new long[n];
        for (int i = 0; i < n; i++) {
            values[i] = in.nextLong();
        }
        System.out.println(Arrays.toString(runningSum(values)));
    }
}
