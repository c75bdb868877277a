import java.util.Scanner;

public class RunLength {
    static String encode(String text) {
        StringBuilder out = new StringBuilder();
        int i = 0;
        while (i < text.length()) {
            char current = text.charAt(i);
            int j = i;
            while (j < text.length() && text.charAt(j) == current) {
                j++;
            }
            out.append(current).append(j - i);
            i = j;
        }
        return out.toString();
    }

    public static void main(String[] args) {
        Scanner in = new Scanner(System.in);
        System.out.println(encode(in.nextLine().trim()));
    }
}
